// Event-stream wiring: every payload (the connect-time snapshot included)
// goes to one callback; disconnects surface so the banner can show, and
// EventSource's automatic reconnect brings a fresh snapshot that resyncs
// the model.

import type { StreamEvent } from "./types";

export interface StreamHandle {
  close(): void;
}

export function connectEvents(
  onEvent: (event: StreamEvent) => void,
  onStatus: (connected: boolean) => void,
  base = "",
): StreamHandle {
  const source = new EventSource(`${base}/events`);
  source.onopen = () => onStatus(true);
  source.onerror = () => onStatus(false); // EventSource retries by itself
  source.onmessage = (raw: MessageEvent<string>) => {
    try {
      onEvent(JSON.parse(raw.data) as StreamEvent);
    } catch {
      // keep-alives and malformed chunks are dropped
    }
  };
  return { close: () => source.close() };
}
