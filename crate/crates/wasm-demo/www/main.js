import init, { expand_regions, annulus_convergence, witness_report } from "./pkg/superber_wasm.js";

const $ = (id) => document.getElementById(id);

function fail(target, e) {
  target.innerHTML = `<p class="err">${String(e)}</p>`;
}

function expand() {
  const out = $("expand-out");
  try {
    const r = JSON.parse(expand_regions($("spectrum").value, +$("lo").value, +$("hi").value));
    const ns = r.regions[0].coeffs.map((c) => c.N);
    let html = `<p>${r.n}|${r.m}, poles at ${r.poles.join(", ")}</p><table><tr><th>s</th>`;
    html += ns.map((n) => `<th>N=${n}</th>`).join("") + "</tr>";
    for (const reg of r.regions) {
      html += `<tr><th>${reg.s}</th>` + reg.coeffs.map((c) => `<td>${c.value}</td>`).join("") + "</tr>";
    }
    out.innerHTML = html + "</table>";
  } catch (e) {
    fail(out, e);
  }
}

function plot(errors) {
  const c = $("plot");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const logs = errors.map((e) => (e > 0 ? Math.log10(e) : null));
  const finite = logs.filter((v) => v !== null);
  if (finite.length === 0) return;
  const top = Math.max(...finite), bottom = Math.min(...finite, top - 1);
  const x = (i) => 30 + (i * (c.width - 40)) / Math.max(1, errors.length - 1);
  const y = (v) => 10 + ((top - v) * (c.height - 30)) / (top - bottom);
  g.strokeStyle = "#36c";
  g.beginPath();
  let started = false;
  logs.forEach((v, i) => {
    if (v === null) return;
    if (started) g.lineTo(x(i), y(v)); else g.moveTo(x(i), y(v));
    started = true;
  });
  g.stroke();
  g.fillStyle = "#444";
  g.fillText(`log10 error ${top.toFixed(1)}`, 2, 10);
  g.fillText(`${bottom.toFixed(1)}`, 2, c.height - 20);
  g.fillText("P →", c.width - 30, c.height - 4);
}

function converge() {
  const out = $("converge-out");
  try {
    const r = JSON.parse(annulus_convergence($("spectrum").value, +$("s").value, +$("n").value, +$("pmax").value));
    const last = r.errors[r.errors.length - 1];
    const ratios = r.errors.slice(1).map((e, i) => (r.errors[i] > 0 ? e / r.errors[i] : NaN)).filter(isFinite);
    const tail = ratios.slice(-5).map((v) => v.toFixed(4)).join(", ");
    out.innerHTML = `<p>exact coefficient <code>${r.target}</code>, ρ = ${r.rho?.toFixed(4)}, ` +
      `final error ${last.toExponential(2)}, last error ratios ${tail}</p>`;
    plot(r.errors);
  } catch (e) {
    fail(out, e);
  }
}

function witness() {
  const out = $("witness-out");
  try {
    const r = JSON.parse(witness_report(+$("wn").value));
    const rows = r.summary.report.conditions.map(
      (c) => `<tr><td>${c.condition}</td><td class="${c.passed ? "pass" : "fail"}">${c.passed ? "pass" : "fail"}</td></tr>`,
    );
    rows.push(`<tr><td>stress tensor</td><td>${r.summary.stress_zero ? "zero" : "nonzero"}</td></tr>`);
    rows.push(`<tr><td>ω closed</td><td>${r.summary.closed}</td></tr>`);
    out.innerHTML = `<p><code>L = ${r.L}</code></p><table>${rows.join("")}</table>` +
      `<p>chart form: <code>${r.chart_omega}</code></p>`;
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("expand").onclick = expand;
$("converge").onclick = converge;
$("witness").onclick = witness;
expand();
