// Sequenced analysis fetches: every control change issues one violations
// request and one heatmap request; responses that were superseded by a
// newer change are discarded no matter when they arrive.

import { stateToQuery, type ExplorerState } from "./state.js";
import type { HeatmapDocument, ViolationsResponse } from "./types.js";

export interface AnalysisPayload {
	seq: number;
	state: ExplorerState;
	violations: ViolationsResponse;
	heatmap: HeatmapDocument;
}

export type JsonFetch = (url: string) => Promise<unknown>;

export class AnalysisFetcher {
	private seq = 0;
	private appliedSeq = 0;

	constructor(
		private readonly fetchJson: JsonFetch,
		private readonly onApply: (payload: AnalysisPayload) => void,
		private readonly onError: (error: unknown) => void = () => {},
		private readonly baseUrl = "",
	) {}

	/** Start the request pair for a new state; returns its sequence number. */
	request(state: ExplorerState): number {
		const seq = ++this.seq;
		const query = stateToQuery(state);
		Promise.all([
			this.fetchJson(`${this.baseUrl}/api/violations?${query}`),
			this.fetchJson(`${this.baseUrl}/api/heatmap?${query}`),
		])
			.then(([violations, heatmap]) => {
				if (seq <= this.appliedSeq) return; // stale: newer params already settled
				this.appliedSeq = seq;
				this.onApply({
					seq,
					state,
					violations: violations as ViolationsResponse,
					heatmap: heatmap as HeatmapDocument,
				});
			})
			.catch((error) => {
				if (seq > this.appliedSeq) this.onError(error);
			});
		return seq;
	}

	get latestRequested(): number {
		return this.seq;
	}

	get latestApplied(): number {
		return this.appliedSeq;
	}
}

export function httpJsonFetch(fetchImpl: typeof fetch = fetch): JsonFetch {
	return async (url: string) => {
		const response = await fetchImpl(url);
		if (!response.ok) {
			const body = await response.json().catch(() => ({}));
			const message = (body as { error?: string }).error ?? `HTTP ${response.status}`;
			throw new Error(message);
		}
		return response.json();
	};
}
