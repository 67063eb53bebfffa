// Explorer state and the single-change reducer behind every control.

import type { RuleKind } from "./types.js";

export const RULE_PRESETS: Record<RuleKind, number> = { hydrant: 30, shelter: 50 };

export interface ExplorerState {
	kind: RuleKind;
	thresholdM: number;
	/** true once the inspector typed a threshold; kind switches then stop swapping presets */
	thresholdOverridden: boolean;
	neighborhoods: string[]; // empty = all
	facilityTypes: string[]; // empty = all
	showCentrality: boolean;
	showSuggestions: boolean;
}

export function initialState(): ExplorerState {
	return {
		kind: "hydrant",
		thresholdM: RULE_PRESETS.hydrant,
		thresholdOverridden: false,
		neighborhoods: [],
		facilityTypes: [],
		showCentrality: false,
		showSuggestions: false,
	};
}

export type ControlChange =
	| { control: "kind"; kind: RuleKind }
	| { control: "threshold"; raw: string }
	| { control: "neighborhoods"; names: string[] }
	| { control: "facilityTypes"; types: string[] }
	| { control: "overlay"; overlay: "centrality" | "suggestions"; enabled: boolean };

export interface ControlResult {
	state: ExplorerState;
	/** issue exactly one violations request and one heatmap request when true */
	refetch: boolean;
	/** inline validation message; when set the state is unchanged and nothing is fetched */
	error: string | null;
}

export function applyControl(state: ExplorerState, change: ControlChange): ControlResult {
	switch (change.control) {
		case "kind": {
			const thresholdM = state.thresholdOverridden ? state.thresholdM : RULE_PRESETS[change.kind];
			return { state: { ...state, kind: change.kind, thresholdM }, refetch: true, error: null };
		}
		case "threshold": {
			const value = Number(change.raw);
			if (!Number.isFinite(value) || value <= 0) {
				return { state, refetch: false, error: `threshold must be a positive number of meters` };
			}
			return {
				state: { ...state, thresholdM: value, thresholdOverridden: true },
				refetch: true,
				error: null,
			};
		}
		case "neighborhoods":
			return { state: { ...state, neighborhoods: [...change.names] }, refetch: true, error: null };
		case "facilityTypes":
			return { state: { ...state, facilityTypes: [...change.types] }, refetch: true, error: null };
		case "overlay": {
			const next =
				change.overlay === "centrality"
					? { ...state, showCentrality: change.enabled }
					: { ...state, showSuggestions: change.enabled };
			return { state: next, refetch: false, error: null };
		}
	}
}

/** Query string shared by the API requests and the shareable page URL. */
export function stateToQuery(state: ExplorerState): string {
	const params = new URLSearchParams();
	params.set("kind", state.kind);
	params.set("threshold", String(state.thresholdM));
	for (const name of state.neighborhoods) params.append("neighborhood", name);
	for (const type of state.facilityTypes) params.append("facility_type", type);
	if (state.showCentrality) params.set("centrality", "1");
	if (state.showSuggestions) params.set("suggestions", "1");
	return params.toString();
}

/** Rebuild state from a page URL query; unknown or malformed values fall back to defaults. */
export function stateFromQuery(query: string): ExplorerState {
	const params = new URLSearchParams(query);
	const state = initialState();

	const kind = params.get("kind");
	if (kind === "hydrant" || kind === "shelter") {
		state.kind = kind;
		state.thresholdM = RULE_PRESETS[kind];
	}
	const threshold = Number(params.get("threshold"));
	if (params.get("threshold") !== null && Number.isFinite(threshold) && threshold > 0) {
		state.thresholdM = threshold;
		state.thresholdOverridden = threshold !== RULE_PRESETS[state.kind];
	}
	state.neighborhoods = params.getAll("neighborhood");
	state.facilityTypes = params.getAll("facility_type");
	state.showCentrality = params.get("centrality") === "1";
	state.showSuggestions = params.get("suggestions") === "1";
	return state;
}
