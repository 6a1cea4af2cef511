// Glue: one event-stream connection feeds the reducer; renders follow every
// model change; a slow snapshot poll keeps the robot countdown honest
// (server time is authoritative, the tick is cosmetic).

import { WorkcellApi } from "./api";
import { render } from "./panels";
import { apply, emptyModel, PanelModel } from "./state";
import { connectEvents } from "./stream";
import type { WorkcellSnapshot } from "./types";

const root = document.getElementById("app") as HTMLElement;
const api = new WorkcellApi();
let model: PanelModel = emptyModel();

function repaint(): void {
  render(root, model, {
    submitOrder: async (form) => {
      const result = await api.submitOrder(form);
      if (!result.ok) {
        model.toasts.push(`order rejected (${result.status}): ${result.detail}`);
        repaint();
      }
    },
    pressTaskDone: async (worker) => {
      const result = await api.pressTaskDone(worker);
      if (!result.ok) {
        // a stale click: the stream will reconcile the card, just explain
        model.toasts.push(`task-done rejected (${result.status}): ${result.detail}`);
        repaint();
      }
    },
    startProduction: () => void api.startProduction(),
    stopProduction: () => void api.stopProduction(),
  });
}

connectEvents(
  (event) => {
    model = apply(model, event);
    repaint();
  },
  (connected) => {
    model.connected = connected;
    repaint();
  },
);

async function pollSnapshot(): Promise<void> {
  try {
    const response = await fetch("/snapshot");
    if (response.ok) {
      const snapshot = (await response.json()) as WorkcellSnapshot;
      model = apply(model, { type: "snapshot", snapshot });
      repaint();
    }
  } catch {
    // the stream's status callback already shows the banner
  }
}

setInterval(pollSnapshot, 1000);
repaint();
