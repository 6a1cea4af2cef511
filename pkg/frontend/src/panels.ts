// DOM rendering for the four panels: customer order form, product queues,
// order board, operation resources. Rendering is a plain projection of the
// model; all enablement rules live in state.ts.

import { PanelModel, cards, submitEnabled, taskDoneEnabled } from "./state";
import type { OrderForm } from "./api";

export interface PanelActions {
  submitOrder(form: OrderForm): void;
  pressTaskDone(worker: string): void;
  startProduction(): void;
  stopProduction(): void;
}

const esc = (text: string) =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function readOrderForm(root: HTMLElement): OrderForm {
  const value = (name: string) =>
    (root.querySelector(`[name=${name}]`) as HTMLInputElement | HTMLSelectElement).value;
  return {
    customer: value("customer"),
    kind: value("kind"),
    color: value("color"),
    power: Number(value("power")),
    amount: Number(value("amount")),
  };
}

export function render(root: HTMLElement, model: PanelModel, actions: PanelActions): void {
  const view = cards(model);
  const banner = model.connected
    ? ""
    : '<div class="banner">connection lost — reconnecting…</div>';
  const toasts = model.toasts
    .slice(-3)
    .map((t) => `<div class="toast">${esc(t)}</div>`)
    .join("");

  const form = renderCustomerPanel();
  const products = renderProductPanel(model);
  const orders = renderOrderPanel(model);
  const resources = renderResourcePanel(model);

  root.innerHTML = `
    ${banner}${toasts}
    <div class="panels">
      <section class="panel" id="customer-panel"><h2>customers</h2>${form}</section>
      <section class="panel" id="product-panel"><h2>products</h2>${products}</section>
      <section class="panel" id="order-panel"><h2>orders</h2>${orders}</section>
      <section class="panel" id="resource-panel"><h2>operation resources</h2>${resources}</section>
    </div>`;

  const submit = root.querySelector("#submit-order") as HTMLButtonElement;
  submit.onclick = () => {
    const data = readOrderForm(root);
    if (!submitEnabled(data)) return;
    actions.submitOrder(data);
  };
  (root.querySelector("#production-start") as HTMLButtonElement).onclick = () =>
    actions.startProduction();
  (root.querySelector("#production-stop") as HTMLButtonElement).onclick = () =>
    actions.stopProduction();
  for (const name of Object.keys(view.workers)) {
    const button = root.querySelector(`[data-task-done="${name}"]`) as HTMLButtonElement;
    button.onclick = () => actions.pressTaskDone(name);
  }
}

function renderCustomerPanel(): string {
  return `
    <form onsubmit="return false">
      <label>customer
        <select name="customer">
          <option>customer-1</option><option>customer-2</option>
        </select></label>
      <label>product
        <select name="kind"><option>pump</option><option>compressor</option></select></label>
      <label>color
        <select name="color">
          <option>blue</option><option>red</option><option>green</option><option>black</option>
        </select></label>
      <label>power <input name="power" type="number" value="5" min="1" max="9"></label>
      <label>amount <input name="amount" type="number" value="1" min="1"></label>
      <button id="submit-order" type="button">send order</button>
    </form>`;
}

function renderProductPanel(model: PanelModel): string {
  const queues = Object.entries(model.productQueues)
    .map(
      ([product, ids]) =>
        `<div class="queue"><h3>${esc(product)}</h3>${
          ids.length
            ? `<ol>${ids.map((id) => `<li>${esc(id)}</li>`).join("")}</ol>`
            : "<p class='empty'>no pending orders</p>"
        }</div>`,
    )
    .join("");
  return queues || "<p class='empty'>no product holons yet</p>";
}

function renderOrderPanel(model: PanelModel): string {
  const running = model.productionRunning;
  const rows = Object.values(model.orders)
    .map(
      (o) => `
      <tr data-order="${esc(o.orderId)}">
        <td>${esc(o.orderId)}</td><td>${esc(o.product)}</td>
        <td>${o.customer ? esc(o.customer) : "—"}</td>
        <td>${o.amount ?? "—"}</td>
        <td class="status-${esc(o.status)}">${esc(o.status)}</td>
        <td>${o.worker ? esc(o.worker) : "—"}</td>
      </tr>`,
    )
    .join("");
  return `
    <p>production: <strong>${running ? "running" : "paused"}</strong>
      <button id="production-start" ${running ? "disabled" : ""}>start</button>
      <button id="production-stop" ${running ? "" : "disabled"}>stop</button></p>
    <table><thead><tr>
      <th>order</th><th>product</th><th>customer</th><th>units</th><th>status</th><th>worker</th>
    </tr></thead><tbody>${rows}</tbody></table>
    <p>completed: ${model.completed.length}</p>`;
}

function renderResourcePanel(model: PanelModel): string {
  const workers = Object.values(model.workers)
    .map((w) => {
      const enabled = taskDoneEnabled(model, w.name);
      return `
      <div class="card worker status-${w.status}" data-worker="${esc(w.name)}">
        <h3>${esc(w.name)}</h3>
        <p class="status">${w.status}</p>
        <p>task: ${w.task ? esc(w.task) : "—"}${w.allUnitsDelivered ? " (all units delivered)" : ""}</p>
        <button data-task-done="${esc(w.name)}" ${enabled ? "" : "disabled"}>task done</button>
      </div>`;
    })
    .join("");
  const job = model.robot.jobs[0];
  const countdown =
    model.robot.remainingMs === null ? "" : ` — ${(model.robot.remainingMs / 1000).toFixed(1)}s left`;
  const robot = `
    <div class="card robot status-${model.robot.status}" data-robot>
      <h3>robot</h3>
      <p class="status">${model.robot.status}</p>
      <p>job: ${job ? esc(job.orderId) : "—"}${countdown}</p>
      ${model.robot.jobs.length > 1 ? `<p>queued: ${model.robot.jobs.slice(1).map((j) => esc(j.orderId)).join(", ")}</p>` : ""}
    </div>`;
  return `<div class="cards">${workers}${robot}</div>`;
}
