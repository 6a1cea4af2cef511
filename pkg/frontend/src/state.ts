// The panel view model and its reducer.
//
// The model is a pure function of (last snapshot, subsequent events): every
// stream payload goes through apply(), snapshots rebuild the model wholesale,
// and replaying the same log always reproduces the same view. No optimistic
// updates anywhere — the server state always wins.

import type {
  RobotStatus,
  StreamEvent,
  WorkcellSnapshot,
  WorkerStatus,
} from "./types";

export interface WorkerCard {
  name: string;
  status: WorkerStatus;
  task: string | null;
  allUnitsDelivered: boolean;
}

export interface RobotJob {
  orderId: string;
  amount: number;
}

export interface RobotCard {
  status: RobotStatus;
  jobs: RobotJob[]; // head is the running job
  remainingMs: number | null; // server-reported; null when unknown or idle
}

export type OrderStatus = "pending" | "queued" | "dispatched" | "completed";

export interface OrderRow {
  orderId: string;
  product: string;
  customer: string | null;
  amount: number | null;
  status: OrderStatus;
  worker: string | null;
}

export interface PanelModel {
  connected: boolean;
  now: number;
  productionRunning: boolean;
  workers: Record<string, WorkerCard>;
  robot: RobotCard;
  orders: Record<string, OrderRow>;
  productQueues: Record<string, string[]>; // per product holon, pending ids
  completed: string[];
  toasts: string[];
}

export function emptyModel(): PanelModel {
  return {
    connected: false,
    now: 0,
    productionRunning: false,
    workers: {},
    robot: { status: "free", jobs: [], remainingMs: null },
    orders: {},
    productQueues: {},
    completed: [],
    toasts: [],
  };
}

/** Rebuild the whole model from an authoritative snapshot (resync). */
export function fromSnapshot(snapshot: WorkcellSnapshot, previous?: PanelModel): PanelModel {
  const model = emptyModel();
  model.connected = true;
  model.now = snapshot.now;
  model.productionRunning = snapshot.production_running;
  for (const [name, w] of Object.entries(snapshot.workers)) {
    model.workers[name] = {
      name,
      status: w.status,
      task: w.task,
      allUnitsDelivered: w.all_units_delivered,
    };
  }
  model.robot.status = snapshot.robot.status;
  const current = snapshot.robot.current_job;
  if (current) {
    model.robot.jobs.push({ orderId: current.order_id, amount: current.amount });
    model.robot.remainingMs = current.remaining_ms;
  }
  for (const queued of snapshot.robot.queued_jobs) {
    model.robot.jobs.push({ orderId: queued, amount: 0 });
  }
  for (const order of snapshot.orders) {
    model.orders[order.order_id] = {
      orderId: order.order_id,
      product: order.product,
      customer: order.customer,
      amount: order.amount,
      status: normalizeStatus(order.status),
      worker: order.worker,
    };
  }
  model.productQueues = { ...snapshot.product_pending };
  model.completed = [...snapshot.completed];
  if (previous) model.toasts = previous.toasts;
  return model;
}

function normalizeStatus(status: string): OrderStatus {
  switch (status) {
    case "queued":
    case "dispatched":
    case "completed":
      return status;
    default:
      return "pending";
  }
}

// The canonical printer emits " :slot value" with single spaces, so the
// interesting tokens are extractable without a full content parser.
const AID = /:aid ([A-Za-z][A-Za-z0-9-]*)/;
const ORDER = /:order ([A-Za-z][A-Za-z0-9-]*)/;
const AMOUNT = /:amount (\d+)/;

function aidOf(content: string): string | null {
  const m = AID.exec(content);
  return m ? m[1] : null;
}

function orderOf(content: string): string | null {
  const m = ORDER.exec(content);
  return m ? m[1] : null;
}

function amountOf(content: string): number | null {
  const m = AMOUNT.exec(content);
  return m ? Number(m[1]) : null;
}

/** Fold one stream payload into the model. Returns the same mutated model. */
export function apply(model: PanelModel, event: StreamEvent): PanelModel {
  if (event.type === "snapshot") {
    return fromSnapshot(event.snapshot, model);
  }
  model.now = Math.max(model.now, event.ts);
  if (event.type === "transition") {
    applyTransition(model, event.agent, event.new as WorkerStatus | RobotStatus);
    return model;
  }
  applyMessage(model, event);
  return model;
}

function applyTransition(model: PanelModel, agent: string, status: string): void {
  if (agent === "robot") {
    model.robot.status = status as RobotStatus;
    if (status === "free") {
      model.robot.jobs = [];
      model.robot.remainingMs = null;
    }
    return;
  }
  const worker = ensureWorker(model, agent);
  worker.status = status as WorkerStatus;
  if (status === "free") {
    worker.task = null;
    worker.allUnitsDelivered = false;
  }
}

function ensureWorker(model: PanelModel, name: string): WorkerCard {
  if (!model.workers[name]) {
    model.workers[name] = { name, status: "free", task: null, allUnitsDelivered: false };
  }
  return model.workers[name];
}

function ensureOrder(model: PanelModel, orderId: string, product: string): OrderRow {
  if (!model.orders[orderId]) {
    model.orders[orderId] = {
      orderId,
      product,
      customer: null,
      amount: null,
      status: "pending",
      worker: null,
    };
  }
  return model.orders[orderId];
}

function applyMessage(
  model: PanelModel,
  event: { performative: string; sender: string; receivers: string[]; content: string },
): void {
  const receiver = event.receivers[0] ?? "";
  switch (event.performative) {
    case "propagate": {
      const orderId = aidOf(event.content);
      if (!orderId) return;
      const row = ensureOrder(model, orderId, event.sender);
      row.status = "queued";
      row.amount = amountOf(event.content);
      break;
    }
    case "request": {
      const orderId = aidOf(event.content);
      if (!orderId || event.sender !== "orders") return;
      const row = ensureOrder(model, orderId, orderId.split("-order-")[0]);
      row.status = "dispatched";
      if (receiver === "robot") {
        model.robot.jobs.push({ orderId, amount: amountOf(event.content) ?? 0 });
      } else {
        row.worker = receiver;
        ensureWorker(model, receiver).task = orderId;
      }
      break;
    }
    case "inform-if": {
      const orderId = orderOf(event.content);
      if (!orderId) return;
      if (receiver === "orders") {
        // the robot finished this delivery job
        model.robot.jobs = model.robot.jobs.filter((job) => job.orderId !== orderId);
        model.robot.remainingMs = null;
      } else if (model.workers[receiver]) {
        model.workers[receiver].allUnitsDelivered = true;
      }
      break;
    }
    case "inform": {
      const orderId = orderOf(event.content);
      if (orderId && receiver === "orders" && !model.completed.includes(orderId)) {
        model.completed.push(orderId);
        ensureOrder(model, orderId, orderId.split("-order-")[0]).status = "completed";
      }
      break;
    }
    case "not-understood":
    case "failure": {
      model.toasts.push(`${event.sender}: ${event.performative} — ${event.content}`);
      break;
    }
    default:
      break; // agree/confirm/inform-ref carry no card changes of their own
  }
}

/** The rendered essence of the model: what the four panels actually show. */
export interface Cards {
  workers: Record<string, { status: string; task: string | null; delivered: boolean }>;
  robot: { status: string; job: string | null };
  orders: Record<string, string>;
  completed: string[];
}

export function cards(model: PanelModel): Cards {
  const workers: Cards["workers"] = {};
  for (const w of Object.values(model.workers)) {
    workers[w.name] = { status: w.status, task: w.task, delivered: w.allUnitsDelivered };
  }
  const orders: Cards["orders"] = {};
  for (const row of Object.values(model.orders)) {
    orders[row.orderId] = row.status;
  }
  return {
    workers,
    robot: { status: model.robot.status, job: model.robot.jobs[0]?.orderId ?? null },
    orders,
    completed: [...model.completed],
  };
}

/** Gateway-precondition mirror: the button is live only when a press would
 * succeed against the displayed state. */
export function taskDoneEnabled(model: PanelModel, worker: string): boolean {
  const card = model.workers[worker];
  return !!card && card.status === "busy" && card.allUnitsDelivered;
}

export function submitEnabled(form: { amount: number }): boolean {
  return Number.isInteger(form.amount) && form.amount >= 1;
}
