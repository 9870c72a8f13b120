import init, { compound, inverseCompound, isDecomposable } from "./pkg/compound_kit_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(out, f) {
  out.classList.remove("err");
  try {
    out.textContent = f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

// CSV with 17-digit entries is hard to read; shorten for display only
const pretty = (csv) =>
  csv.trim().split("\n").map((r) => r.split(",").map((v) => Number(v).toPrecision(6)).join(", ")).join("\n");

function formatRecovery(json) {
  const r = JSON.parse(json);
  const mat = (rows) => rows.map((row) => row.map((v) => v.toPrecision(6)).join(", ")).join("\n");
  let s = `outcome: ${r.outcome}   residual: ${r.residual.toExponential(2)}   inferred r: ${r.inferred_r}\n\n`;
  if (r.family) {
    s += "A = U S T V^T for any T with det T = 1\n\nU\n" + mat(r.family.u) + "\n\nS\n" + mat(r.family.sigma) + "\n\nV\n" + mat(r.family.v);
  } else {
    s += (r.sign_ambiguous ? "A (or -A)\n" : "A\n") + mat(r.a);
  }
  return s;
}

await init();

$("c-run").onclick = () => show($("c-out"), () => pretty(compound($("c-in").value, num("c-k"))));
$("c-send").onclick = () => {
  show($("c-out"), () => {
    const csv = compound($("c-in").value, num("c-k"));
    const a = $("c-in").value.trim().split("\n");
    $("i-in").value = csv;
    $("i-n").value = a.length;
    $("i-m").value = a[0].split(",").length;
    $("i-k").value = num("c-k");
    return pretty(csv);
  });
};
$("i-run").onclick = () =>
  show($("i-out"), () => formatRecovery(inverseCompound($("i-in").value, num("i-n"), num("i-m"), num("i-k"), num("i-seed"))));
$("d-run").onclick = () =>
  show($("d-out"), () => {
    const r = JSON.parse(isDecomposable($("d-in").value, num("d-n"), num("d-k")));
    return `decomposable: ${r.decomposable}   wedge-matrix kernel dimension: ${r.kernel_dim}`;
  });
