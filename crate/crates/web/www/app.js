import init, { simulate, consistentAnnouncements, runSuite } from "./pkg/seqgroves_web.js";

const $ = (id) => document.getElementById(id);

function table(header, rows) {
  const head = "<tr>" + header.map((h) => `<th>${h}</th>`).join("") + "</tr>";
  const body = rows.map((r) => "<tr>" + r.map((c) => `<td>${c}</td>`).join("") + "</tr>").join("");
  return `<table>${head}${body}</table>`;
}

function guard(out, fn) {
  try {
    fn();
  } catch (e) {
    out.innerHTML = `<p class="fail">${e.message ?? e}</p>`;
  }
}

function showSimulation() {
  const out = $("sim-out");
  guard(out, () => {
    const runs = JSON.parse(simulate($("sim-mech").value, $("sim-types").value, $("sim-profile").value));
    out.innerHTML = runs
      .map((run) => {
        const rows = run.announcements.map((a, i) => [i + 1, a, run.taxes[i], run.utilities[i]]);
        return `<h3>${run.profile}: winner ${run.winner}, welfare ${run.social_welfare}</h3>` +
          table(["player", "bid", "tax", "utility"], rows);
      })
      .join("");
  });
}

function showConsistent() {
  const out = $("con-out");
  guard(out, () => {
    const all = JSON.parse(consistentAnnouncements($("con-theta").value, $("con-grid").value));
    out.innerHTML = `<p>${all.length} announcement vectors</p><pre>${all.map((a) => "(" + a.join(", ") + ")").join("\n")}</pre>`;
  });
}

function showSuite() {
  const out = $("suite-out");
  out.textContent = "running...";
  // yield so the status text paints before the sweep blocks the thread
  setTimeout(() => guard(out, () => {
    const reports = JSON.parse(runSuite($("suite-name").value, Number($("suite-n").value), $("suite-grid").value));
    const rows = reports.map((r) => [
      `<span class="${r.passed ? "pass" : "fail"}">${r.passed ? "PASS" : "FAIL"}</span>`,
      r.suite,
      r.instances,
      r.witness ? r.witness.note : "",
    ]);
    out.innerHTML = table(["result", "suite", "instances", "witness"], rows);
  }), 0);
}

await init();
$("sim-run").addEventListener("click", showSimulation);
$("con-run").addEventListener("click", showConsistent);
$("suite-run").addEventListener("click", showSuite);
