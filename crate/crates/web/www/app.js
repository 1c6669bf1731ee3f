// Expects the wasm-bindgen output (--target web) in ./pkg.
import init, { explore_plane, classify_support, find_singular_points } from "./pkg/cubic7_web.js";

const $ = (id) => document.getElementById(id);

function show(el, f) {
  el.classList.remove("err");
  try {
    return f();
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e);
  }
}

function slotBoxes() {
  const fam = document.querySelector("input[name=fam]:checked").value;
  const names = fam === "c7" ? ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"] : ["c1", "c2", "c3", "c4"];
  $("slots").innerHTML = names
    .map((n, i) => `<label><input type="checkbox" value="${i}" checked> ${n}</label>`)
    .join("");
}

async function main() {
  await init();

  $("plane-go").onclick = () =>
    show($("plane-out"), () => {
      const r = JSON.parse(explore_plane($("grid").value));
      $("plane-svg").innerHTML = r.svg;
      const special = r.rows.filter((x) => x.label !== "smooth");
      $("plane-out").textContent =
        `${r.rows.length} rows, ${special.length} not smooth\n` +
        special.map((x) => `${x.a} ${x.b}  ${x.label}`).join("\n");
    });

  for (const el of document.querySelectorAll("input[name=fam]")) el.onchange = slotBoxes;
  slotBoxes();
  $("git-go").onclick = () =>
    show($("git-out"), () => {
      const fam = document.querySelector("input[name=fam]:checked").value;
      const slots = [...document.querySelectorAll("#slots input:checked")].map((x) => x.value).join(",");
      const r = JSON.parse(classify_support(fam, slots));
      $("git-out").textContent =
        `support ${r.pattern}\noracle:      ${r.oracle}\nclosed form: ${r.closed_form}\n` +
        (r.certificate ? `1-PS weights: (${r.certificate.join(", ")})` : "no destabilizing 1-PS");
    });

  $("sing-go").onclick = () =>
    show($("sing-out"), () => {
      const r = JSON.parse(find_singular_points($("sa").value, $("sb").value));
      $("sing-out").textContent =
        `${r.label}; curve flags ${JSON.stringify(r.on_curve)}\n` +
        r.points.map((p) => `${p.class}  [${p.coords.join(" : ")}]`).join("\n");
    });

  $("plane-go").click();
}

main();
