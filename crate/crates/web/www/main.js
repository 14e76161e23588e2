// Expects the output of
//   wasm-pack build crates/web --target web --out-dir www/pkg
import init, { build_family, invariants, compare } from "./pkg/filiform_web.js";

const $ = (id) => document.getElementById(id);
const prime = (id) => Number($(id).value);

function show(id, json) {
  const v = JSON.parse(json);
  if (v.error) {
    $(id).textContent = "error: " + v.error;
    return;
  }
  if (v.file) {
    $(id).textContent = v.file;
    return;
  }
  if (v.witness) {
    const rows = v.witness.map((r) => r.join(" ")).join("\n");
    $(id).textContent = "isomorphic; columns are images of e1..en:\n" + rows;
    return;
  }
  if (v.isomorphic === false) {
    $(id).textContent = "not isomorphic: " + v.reason;
    return;
  }
  $(id).textContent = Object.entries(v)
    .map(([k, x]) => `${k}: ${JSON.stringify(x)}`)
    .join("\n");
}

await init();

$("b-go").onclick = () =>
  show("b-out", build_family($("b-tag").value, $("b-params").value, prime("b-prime")));
$("i-go").onclick = () =>
  show("i-out", invariants($("i-tag").value, $("i-params").value, prime("i-prime")));
$("c-go").onclick = () =>
  show(
    "c-out",
    compare(
      $("c-tag-a").value,
      $("c-params-a").value,
      $("c-tag-b").value,
      $("c-params-b").value,
      prime("c-prime"),
    ),
  );
