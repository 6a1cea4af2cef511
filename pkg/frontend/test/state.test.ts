// Acceptance for the panels: replaying the reference-scenario event log
// against a mock stream must land every card in its final state, the
// task-done button must mirror the gateway's preconditions, and a stale
// click must reconcile to what the server says.

import { describe, expect, it } from "vitest";

import {
  apply,
  cards,
  emptyModel,
  fromSnapshot,
  PanelModel,
  submitEnabled,
  taskDoneEnabled,
} from "../src/state";
import type { StreamEvent, WorkcellSnapshot } from "../src/types";
import fixture from "./fixtures/reference_stream.json";

const initialSnapshot = fixture.initial_snapshot as unknown as WorkcellSnapshot;
const events = fixture.events as unknown as StreamEvent[];
const finalSnapshot = fixture.final_snapshot as unknown as WorkcellSnapshot;

function replayAll(): PanelModel {
  let model = fromSnapshot(initialSnapshot);
  for (const event of events) {
    model = apply(model, event);
  }
  return model;
}

describe("reference event log replay", () => {
  it("empty platform renders all cards free with empty queues", () => {
    const model = fromSnapshot(initialSnapshot);
    const view = cards(model);
    expect(view.workers["worker-1"].status).toBe("free");
    expect(view.workers["worker-2"].status).toBe("free");
    expect(view.robot).toEqual({ status: "free", job: null });
    expect(view.orders).toEqual({});
    expect(model.completed).toEqual([]);
  });

  it("yields worker-1 free, worker-2 free, robot free and 2 completed orders", () => {
    const view = cards(replayAll());
    expect(view.workers["worker-1"].status).toBe("free");
    expect(view.workers["worker-2"].status).toBe("free");
    expect(view.robot.status).toBe("free");
    expect(view.completed).toEqual(["pump-order-1", "compressor-order-1"]);
    expect(view.orders["pump-order-1"]).toBe("completed");
    expect(view.orders["compressor-order-1"]).toBe("completed");
  });

  it("incremental state equals a snapshot resync (reconnect equivalence)", () => {
    const incremental = cards(replayAll());
    const resynced = cards(fromSnapshot(finalSnapshot));
    expect(incremental).toEqual(resynced);
  });

  it("walks each worker through reserve and busy exactly once", () => {
    let model = fromSnapshot(initialSnapshot);
    const seen: Record<string, string[]> = { "worker-1": [], "worker-2": [] };
    for (const event of events) {
      model = apply(model, event);
      for (const name of Object.keys(seen)) {
        const status = model.workers[name].status;
        const trail = seen[name];
        if (trail[trail.length - 1] !== status) trail.push(status);
      }
    }
    expect(seen["worker-1"]).toEqual(["free", "reserve", "busy", "free"]);
    expect(seen["worker-2"]).toEqual(["free", "reserve", "busy", "free"]);
  });

  it("an inform-ref's transition moves the worker card reserve to busy", () => {
    let model = fromSnapshot(initialSnapshot);
    for (const event of events) {
      const isFirstUnit =
        event.type === "message" &&
        event.performative === "inform-ref" &&
        event.receivers[0] === "worker-1";
      if (isFirstUnit) {
        expect(model.workers["worker-1"].status).toBe("reserve");
      }
      model = apply(model, event);
      if (isFirstUnit) continue;
      if (event.type === "transition" && event.agent === "worker-1" && event.new === "busy") {
        expect(model.workers["worker-1"].status).toBe("busy");
        break;
      }
    }
  });

  it("tracks the robot's job queue through both deliveries", () => {
    let model = fromSnapshot(initialSnapshot);
    const jobTrail: (string | null)[] = [];
    for (const event of events) {
      model = apply(model, event);
      const head = model.robot.jobs[0]?.orderId ?? null;
      if (jobTrail[jobTrail.length - 1] !== head) jobTrail.push(head);
    }
    expect(jobTrail).toEqual([null, "pump-order-1", "compressor-order-1", null]);
  });
});

describe("task-done enablement mirrors the gateway preconditions", () => {
  it("is disabled in free and reserve, enabled only busy-with-deliveries", () => {
    let model = fromSnapshot(initialSnapshot);
    expect(taskDoneEnabled(model, "worker-1")).toBe(false); // free
    for (const event of events) {
      model = apply(model, event);
      const card = model.workers["worker-1"];
      const enabled = taskDoneEnabled(model, "worker-1");
      if (card.status === "free" || card.status === "reserve") {
        expect(enabled).toBe(false);
      }
      if (enabled) {
        expect(card.status).toBe("busy");
        expect(card.allUnitsDelivered).toBe(true);
      }
    }
  });

  it("is enabled at the moment the reference run expects the press", () => {
    let model = fromSnapshot(initialSnapshot);
    let everEnabled = false;
    for (const event of events) {
      model = apply(model, event);
      everEnabled ||= taskDoneEnabled(model, "worker-1");
    }
    expect(everEnabled).toBe(true);
  });

  it("unknown workers are never enabled", () => {
    expect(taskDoneEnabled(emptyModel(), "worker-9")).toBe(false);
  });
});

describe("order form", () => {
  it("blocks non-positive amounts", () => {
    expect(submitEnabled({ amount: 0 })).toBe(false);
    expect(submitEnabled({ amount: -3 })).toBe(false);
    expect(submitEnabled({ amount: 1.5 })).toBe(false);
    expect(submitEnabled({ amount: 1 })).toBe(true);
  });
});

describe("stale interactions reconcile to server state", () => {
  it("keeps the card untouched on 409 and adopts the next server event", () => {
    // the model still believes worker-1 is busy with all units delivered...
    let model = replayAll();
    const midRun = events.findIndex(
      (e) => e.type === "transition" && e.agent === "worker-1" && e.new === "free",
    );
    model = fromSnapshot(initialSnapshot);
    for (const event of events.slice(0, midRun)) model = apply(model, event);
    expect(taskDoneEnabled(model, "worker-1")).toBe(true);

    // ...but the press raced the done-signal: the server already freed it.
    // No optimistic mutation happens on the client.
    const before = JSON.stringify(cards(model));
    model.toasts.push("task-done rejected (409): worker-1 is free, not busy");
    expect(JSON.stringify(cards(model))).toBe(before);

    // the pending stream events bring the card to the server's truth
    for (const event of events.slice(midRun)) model = apply(model, event);
    expect(model.workers["worker-1"].status).toBe("free");
    expect(taskDoneEnabled(model, "worker-1")).toBe(false);
    expect(cards(model)).toEqual(cards(fromSnapshot(finalSnapshot)));
  });
});
