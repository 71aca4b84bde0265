import init, { cbfSample, dtwAlignment, mjcJumps, parameterSweep } from "./pkg/tsmeasures_web.js";

const $ = (id) => document.getElementById(id);

function series() {
  const seed = BigInt($("seed").value || 0);
  const x = cbfSample(Number($("cls-x").value), Number($("len-x").value), seed);
  const y = cbfSample(Number($("cls-y").value), Number($("len-y").value), seed + 1n);
  return [x, y];
}

function drawLines(canvas, lines, colors) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const all = lines.flat();
  const lo = Math.min(...all), hi = Math.max(...all);
  const span = hi - lo || 1;
  lines.forEach((line, k) => {
    ctx.strokeStyle = colors[k];
    ctx.beginPath();
    line.forEach((v, i) => {
      const px = (i / Math.max(line.length - 1, 1)) * (canvas.width - 10) + 5;
      const py = canvas.height - 5 - ((v - lo) / span) * (canvas.height - 10);
      i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
  });
}

function drawMatrix(a) {
  const canvas = $("matrix");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const cw = canvas.width / (a.cols - 1), ch = canvas.height / (a.rows - 1);
  const finite = a.matrix.filter((v) => v !== null);
  const max = Math.log1p(Math.max(...finite));
  for (let i = 1; i < a.rows; i++) {
    for (let j = 1; j < a.cols; j++) {
      const v = a.matrix[i * a.cols + j];
      if (v === null) continue;
      const shade = 255 - Math.round((Math.log1p(v) / max) * 200);
      ctx.fillStyle = `rgb(${shade},${shade},255)`;
      ctx.fillRect((j - 1) * cw, (i - 1) * ch, cw + 0.5, ch + 0.5);
    }
  }
  ctx.fillStyle = "#c00";
  for (const [i, j] of a.path) {
    ctx.fillRect((j - 1) * cw, (i - 1) * ch, Math.max(cw, 2), Math.max(ch, 2));
  }
}

function drawSweep(points) {
  const canvas = $("sweep");
  drawLines(canvas, [points.map((p) => p.distance)], ["#06c"]);
  const ctx = canvas.getContext("2d");
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(points[0].label, 5, 12);
  const last = points[points.length - 1].label;
  ctx.fillText(last, canvas.width - ctx.measureText(last).width - 5, 12);
}

function update() {
  const [x, y] = series();
  drawLines($("series"), [Array.from(x), Array.from(y)], ["#06c", "#c60"]);
  $("window").max = Math.max(x.length, y.length);
  $("window-val").textContent = $("window").value;
  $("beta-val").textContent = $("beta").value;
  try {
    const a = JSON.parse(dtwAlignment(x, y, Number($("window").value)));
    $("dtw-out").textContent = `distance ${a.distance.toFixed(4)}, path length ${a.path.length}`;
    drawMatrix(a);
    const t = JSON.parse(mjcJumps(x, y, Number($("beta").value)));
    $("mjc-out").textContent = `cost ${t.cost.toFixed(4)}, ${t.jumps.length} jumps`;
    $("jumps").textContent = t.jumps
      .map((j) => `${j.from} ${j.source} -> ${j.target}  ${j.cost.toFixed(3)}`)
      .join("\n");
    drawSweep(JSON.parse(parameterSweep($("measure").value, x, y)));
  } catch (e) {
    $("dtw-out").textContent = String(e);
  }
}

await init();
for (const el of document.querySelectorAll("input, select")) {
  el.addEventListener("input", update);
}
update();
