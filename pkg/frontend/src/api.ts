// Thin fetch wrappers over the gateway endpoints. The fetch function is
// injectable so tests can stand in a mock server.

export interface OrderForm {
  customer: string;
  kind: string;
  color: string;
  power: number;
  amount: number;
}

export interface ApiResult {
  ok: boolean;
  status: number;
  detail: string;
  conversationId?: string;
}

export class WorkcellApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  private async post(path: string, body?: unknown): Promise<ApiResult> {
    const response = await this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
    let payload: Record<string, unknown> = {};
    try {
      payload = (await response.json()) as Record<string, unknown>;
    } catch {
      // non-JSON error bodies render as their status line
    }
    return {
      ok: response.ok,
      status: response.status,
      detail: typeof payload.detail === "string" ? payload.detail : "",
      conversationId:
        typeof payload.conversation_id === "string" ? payload.conversation_id : undefined,
    };
  }

  submitOrder(form: OrderForm): Promise<ApiResult> {
    return this.post("/orders", form);
  }

  pressTaskDone(worker: string): Promise<ApiResult> {
    return this.post(`/workers/${worker}/task-done`);
  }

  startProduction(): Promise<ApiResult> {
    return this.post("/production/start");
  }

  stopProduction(): Promise<ApiResult> {
    return this.post("/production/stop");
  }

  reorderQueue(product: string, permutation: number[]): Promise<ApiResult> {
    return this.post(`/products/${product}/reorder`, { permutation });
  }
}
