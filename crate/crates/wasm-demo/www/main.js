import init, { stft_magnitudes, section_density, frame_spectrum } from "./pkg/lcagabor_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const group = () => [num("p"), $("modular").checked];

function showError(el, err) {
  el.textContent = String(err);
  el.className = "error";
}

function drawStft() {
  const [p, modular] = group();
  const m = num("stft-m"), k = num("stft-k");
  const msg = $("stft-msg");
  msg.className = "";
  let mags;
  try {
    mags = stft_magnitudes(p, modular, m, k, num("stft-j"), BigInt(num("stft-seed")));
  } catch (e) {
    showError(msg, e);
    return;
  }
  const side = Math.round(Math.sqrt(mags.length));
  const canvas = $("stft-canvas");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(side, side);
  const max = mags.reduce((a, b) => Math.max(a, b), 0) || 1;
  mags.forEach((v, i) => {
    const t = v / max;
    img.data[4 * i] = Math.round(255 * t);
    img.data[4 * i + 1] = Math.round(255 * t * t);
    img.data[4 * i + 2] = Math.round(255 * (1 - t) * 0.6);
    img.data[4 * i + 3] = 255;
  });
  const off = new OffscreenCanvas(side, side);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  msg.textContent = `${side} x ${side} grid, max |V| = ${max.toFixed(4)}`;
}

function showDensity() {
  const [p, modular] = group();
  const out = $("dens-out");
  out.className = "";
  try {
    const prof = JSON.parse(section_density(p, modular, num("dens-outer"), num("dens-inner")));
    const rows = prof.rows
      .map((r) => `<tr><td>${r.n}</td><td>${r.max_count}</td><td>${r.min_count}</td><td>${r.upper_ratio}</td><td>${r.lower_ratio}</td></tr>`)
      .join("");
    out.innerHTML = `<table><tr><th>n</th><th>max</th><th>min</th><th>upper</th><th>lower</th></tr>${rows}</table>`;
  } catch (e) {
    showError(out, e);
  }
}

function showFrame() {
  const [p, modular] = group();
  const out = $("frame-out");
  out.className = "";
  try {
    const v = JSON.parse(frame_spectrum(p, modular, num("frame-m"), num("frame-k"), $("frame-family").value, num("frame-j")));
    const r = v.report;
    out.textContent = [
      `${v.name}: ${r.classification}${r.c !== undefined ? ` (c = ${r.c.toFixed(9)})` : ""}`,
      `dim ${r.dim}, vectors ${r.count}, rank ${r.rank}`,
      `bounds [${r.lower.toExponential(6)}, ${r.upper.toExponential(6)}]`,
      `eigenvalues: ${v.eigenvalues.map((e) => e.toFixed(6)).join(" ")}`,
    ].join("\n");
  } catch (e) {
    showError(out, e);
  }
}

await init();
$("stft-run").addEventListener("click", drawStft);
$("dens-run").addEventListener("click", showDensity);
$("frame-run").addEventListener("click", showFrame);
drawStft();
showDensity();
showFrame();
