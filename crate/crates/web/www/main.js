import init, { kkv_table, ray_series, vw_check } from "./pkg/k3series_web.js";

const $ = (id) => document.getElementById(id);

function grid(header, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const row of rows) {
    const tr = t.insertRow();
    row.forEach((cell, i) => {
      const td = i === 0 ? document.createElement("th") : tr.insertCell();
      td.textContent = cell;
      if (i > 0 && cell === "0") td.className = "zero";
      if (i === 0) tr.appendChild(td);
    });
  }
  return t;
}

function frac(c) {
  return c.den === "1" ? c.num : `${c.num}/${c.den}`;
}

function show(el, node) {
  el.replaceChildren(node);
}

function call(fn, ...args) {
  const out = JSON.parse(fn(...args));
  if (out.error) throw new Error(out.error);
  return out;
}

function guarded(form, handler) {
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const data = Object.fromEntries(new FormData(form));
    try {
      handler(data);
    } catch (e) {
      const p = document.createElement("p");
      p.className = "fail";
      p.textContent = e.message;
      show($(form.dataset.out), p);
    }
  });
}

function setupKkv() {
  guarded($("kkv-form"), ({ h_max }) => {
    const out = call(kkv_table, Number(h_max));
    const header = ["g \\ h", ...out.rows[0].map((_, h) => String(h))];
    show($("kkv-out"), grid(header, out.rows.map((r, g) => [String(g), ...r])));
  });
}

function setupRay() {
  guarded($("ray-form"), (d) => {
    const [h0, dMax, qMin, qMax] = [d.h0, d.d_max, d.q_min, d.q_max].map(Number);
    const out = call(ray_series, BigInt(h0), BigInt(dMax), BigInt(qMin), BigInt(qMax));
    const cells = new Map(out[d.series].map((r) => [`${r.d},${r.n}`, frac(r.coefficient)]));
    const rows = [];
    for (let n = qMin; n <= qMax; n++) {
      const row = [`q^${n}`];
      for (let k = 1; k <= dMax; k++) row.push(cells.get(`${k},${n}`) ?? "0");
      rows.push(row);
    }
    const header = ["", ...Array.from({ length: dMax }, (_, i) => `v^${i + 1}`)];
    $("ray-chain").textContent = out.identity_chain
      ? "F = -log(1 + z_chi) = log(1 + z_twistor) holds exactly on this window."
      : "identity chain FAILED";
    show($("ray-out"), grid(header, rows));
  });
}

function setupVw() {
  guarded($("vw-form"), ({ chi0, vw }) => {
    const out = call(vw_check, BigInt(chi0), vw);
    const rows = out.records.map((r) => [
      String(r.M), frac(r.vw), frac(r.P), frac(r.P_perp), frac(r.VW), r.pass ? "yes" : "no",
    ]);
    const s = $("vw-summary");
    s.className = out.pass ? "pass" : "fail";
    s.textContent = `exp identity ${out.exp_identity ? "holds" : "fails"}; VW = vw ${out.pass ? "at every M" : "fails for some M"}`;
    show($("vw-out"), grid(["M", "vw", "P", "P_perp", "VW", "VW = vw"], rows));
  });
}

init().then(() => {
  $("status").textContent = "";
  setupKkv();
  setupRay();
  setupVw();
}).catch((e) => {
  $("status").textContent = `failed to load wasm: ${e}`;
});
