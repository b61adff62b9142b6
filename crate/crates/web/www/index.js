import init, { normalize, pipeline, evaluate } from "./pkg/flatfix_web.js";

const $ = (id) => document.getElementById(id);

function guarded(out, f) {
  try {
    out.classList.remove("error");
    f();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e.message ?? e);
  }
}

function showPipeline() {
  const out = $("pipeline-out");
  guarded(out, () => {
    const docs = JSON.parse(pipeline($("sigs").value, $("lean").checked));
    out.replaceChildren();
    for (const d of docs) {
      const h = document.createElement("h3");
      h.textContent = d.connective;
      out.append(h);
      for (const [label, key] of [["system", "represent"], ["simulation", "simulate"], ["K+", "kffplus"]]) {
        const p = document.createElement("pre");
        p.textContent = `# ${label}\n${d[key]}`;
        out.append(p);
      }
    }
  });
}

function showNormalize() {
  const out = $("normalize-out");
  guarded(out, () => {
    const r = JSON.parse(normalize($("formula").value, "x", $("sigs").value));
    out.textContent = [
      `nabla:       ${r.nabla}`,
      `disjunctive: ${r.disjunctive}`,
      `pure:        ${r.pure}`,
      `pure in x:   ${r.pure_x}`,
    ].join("\n");
  });
}

function showEvaluate() {
  const out = $("evaluate-out");
  guarded(out, () => {
    const r = JSON.parse(evaluate($("model").value, $("eval-formula").value, $("sigs").value));
    out.textContent = `${r.formula} holds at ${r.shown}`;
  });
}

await init();
$("run-pipeline").onclick = showPipeline;
$("run-normalize").onclick = showNormalize;
$("run-evaluate").onclick = showEvaluate;
showPipeline();
