// Wire types mirroring the gateway's snapshot and event-stream payloads.

export type WorkerStatus = "free" | "reserve" | "busy";
export type RobotStatus = "free" | "busy";

export interface SnapshotWorker {
  status: WorkerStatus;
  workstation: string;
  task: string | null;
  all_units_delivered: boolean;
}

export interface SnapshotRobotJob {
  order_id: string;
  worker: string;
  amount: number;
  remaining_ms: number;
}

export interface SnapshotOrder {
  order_id: string;
  product: string;
  customer: string;
  amount: number;
  status: string;
  worker: string | null;
}

export interface WorkcellSnapshot {
  now: number;
  production_running: boolean;
  workers: Record<string, SnapshotWorker>;
  robot: {
    status: RobotStatus;
    current_job: SnapshotRobotJob | null;
    queued_jobs: string[];
  };
  order_queue: { order_id: string; kind: string; amount: number }[];
  in_flight: Record<string, { worker: string; robot_done: boolean; worker_done: boolean }>;
  completed: string[];
  product_pending: Record<string, string[]>;
  orders: SnapshotOrder[];
}

export interface MessageEvent_ {
  type: "message";
  ts: number;
  performative: string;
  sender: string;
  receivers: string[];
  conversation_id: string;
  reply_with: string | null;
  in_reply_to: string | null;
  content: string;
}

export interface TransitionEvent {
  type: "transition";
  ts: number;
  agent: string;
  old: string;
  new: string;
}

export interface SnapshotEvent {
  type: "snapshot";
  snapshot: WorkcellSnapshot;
}

export type StreamEvent = MessageEvent_ | TransitionEvent | SnapshotEvent;
