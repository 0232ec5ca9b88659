// Build with: wasm-pack build crates/web --target web --out-dir www/pkg
import init, { evaluate, automorphism, bracket_grid } from "./pkg/lhv_web.js";

const CONFIGS = {
  z: {
    schema: 1,
    field: "rationals",
    gamma: { generators: ["1"] },
    box: { gamma: [[-3, 3]], t: [-3, 3], pad: 3 },
  },
  q2: {
    schema: 1,
    field: { quadratic: 2 },
    gamma: { generators: ["1", "sqrt(2)"] },
    box: { gamma: [[-1, 1], [-1, 1]], t: [-1, 1], pad: 1 },
  },
};

const $ = (id) => document.getElementById(id);
const config = () => JSON.stringify(CONFIGS[$("lattice").value]);

function show(target, f) {
  target.classList.remove("error");
  try {
    target.textContent = f();
  } catch (e) {
    target.classList.add("error");
    target.textContent = String(e);
  }
}

function runEval() {
  show($("expr-out"), () => JSON.parse(evaluate(config(), $("expr").value)).text);
}

function runAut() {
  show($("aut-out"), () => {
    const r = JSON.parse(automorphism(config(), $("params").value, $("aut-expr").value));
    return [
      `image       ${r.image}`,
      `inverse     ${JSON.stringify(r.inverse)}`,
      `round trip  ${r.round_trip} (${r.round_trip_ok ? "ok" : "mismatch"})`,
    ].join("\n");
  });
}

function runGrid() {
  const out = $("grid-out");
  let g;
  try {
    g = JSON.parse(bracket_grid(config(), $("gx").value, $("gy").value,
      Number($("gi").value), Number($("gj").value), Number($("gn").value)));
  } catch (e) {
    out.innerHTML = `<p class="error">${e}</p>`;
    return;
  }
  const head = "<tr><th>a \\ b</th>" + g.labels.map((l) => `<th>${l}</th>`).join("") + "</tr>";
  const body = g.rows.map((row, k) =>
    `<tr><th>${g.labels[k]}</th>` +
    row.map((c) => c.basis === null
      ? `<td class="zero">0</td>`
      : `<td title="${c.basis}">${c.coeff}</td>`).join("") + "</tr>").join("");
  out.innerHTML = `<table>${head}${body}</table>`;
}

await init();
$("eval").onclick = runEval;
$("apply").onclick = runAut;
$("grid").onclick = runGrid;
$("lattice").onchange = () => { runEval(); runGrid(); };
runEval();
runAut();
runGrid();
