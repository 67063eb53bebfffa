// Bootstrap: wire controls, fetches, URL sync, and the map.

import { Debouncer } from "./debounce.js";
import { AnalysisFetcher, httpJsonFetch, type AnalysisPayload } from "./fetcher.js";
import { boundsOfGeometries, Projection } from "./projection.js";
import {
	applyControl,
	initialState,
	stateFromQuery,
	stateToQuery,
	type ControlChange,
	type ExplorerState,
} from "./state.js";
import type { CentralityResponse, MetaResponse, RuleKind, SuggestionsResponse } from "./types.js";
import { renderChoropleth, renderLegend, renderList, renderMarkers } from "./render.js";
import { choroplethModel, legendModel, violationsModel } from "./viewmodel.js";

const MAP_WIDTH = 760;
const MAP_HEIGHT = 560;

function el<T extends HTMLElement>(id: string): T {
	const node = document.getElementById(id);
	if (!node) throw new Error(`missing element #${id}`);
	return node as T;
}

function svgLayer(id: string): SVGGElement {
	const node = document.getElementById(id);
	if (!node) throw new Error(`missing svg layer #${id}`);
	return node as unknown as SVGGElement;
}

class ExplorerApp {
	private state: ExplorerState;
	private readonly fetchJson = httpJsonFetch();
	private readonly fetcher = new AnalysisFetcher(
		this.fetchJson,
		(payload) => this.applyPayload(payload),
		(error) => this.showError(String(error)),
	);
	private readonly thresholdDebounce = new Debouncer(300);
	private projection: Projection | null = null;
	private markerById = new Map<string, SVGCircleElement>();

	constructor() {
		this.state = window.location.search.length > 1 ? stateFromQuery(window.location.search) : initialState();
	}

	async start(): Promise<void> {
		const meta = (await this.fetchJson("/api/meta")) as MetaResponse;
		this.buildCheckboxes("neighborhood-filters", meta.neighborhoods, this.state.neighborhoods, (names) =>
			this.dispatch({ control: "neighborhoods", names }),
		);
		this.buildCheckboxes("type-filters", meta.facility_types, this.state.facilityTypes, (types) =>
			this.dispatch({ control: "facilityTypes", types }),
		);
		el<HTMLElement>("dataset-info").textContent =
			`${meta.counts.facilities} facilities, ${meta.counts.hydrants} hydrants, ` +
			`${meta.counts.shelters} shelters (${meta.source || "dataset"})`;

		this.bindControls();
		this.syncControls();
		this.fetcher.request(this.state);
		this.refreshOverlays();
	}

	private dispatch(change: ControlChange): void {
		const result = applyControl(this.state, change);
		const errorBox = el<HTMLElement>("threshold-error");
		errorBox.textContent = result.error ?? "";
		if (result.error !== null) return;
		this.state = result.state;
		this.syncControls();
		window.history.replaceState(null, "", `?${stateToQuery(this.state)}`);
		if (result.refetch) this.fetcher.request(this.state);
		this.refreshOverlays();
	}

	private bindControls(): void {
		for (const kind of ["hydrant", "shelter"] as RuleKind[]) {
			el<HTMLInputElement>(`kind-${kind}`).addEventListener("change", () =>
				this.dispatch({ control: "kind", kind }),
			);
		}
		el<HTMLInputElement>("threshold-input").addEventListener("input", (event) => {
			const raw = (event.target as HTMLInputElement).value;
			this.thresholdDebounce.run(() => this.dispatch({ control: "threshold", raw }));
		});
		el<HTMLInputElement>("overlay-centrality").addEventListener("change", (event) =>
			this.dispatch({
				control: "overlay",
				overlay: "centrality",
				enabled: (event.target as HTMLInputElement).checked,
			}),
		);
		el<HTMLInputElement>("overlay-suggestions").addEventListener("change", (event) =>
			this.dispatch({
				control: "overlay",
				overlay: "suggestions",
				enabled: (event.target as HTMLInputElement).checked,
			}),
		);
	}

	private buildCheckboxes(
		containerId: string,
		names: string[],
		selected: string[],
		onChange: (names: string[]) => void,
	): void {
		const container = el<HTMLElement>(containerId);
		container.replaceChildren();
		const chosen = new Set(selected);
		for (const name of names) {
			const label = document.createElement("label");
			const box = document.createElement("input");
			box.type = "checkbox";
			box.value = name;
			box.checked = chosen.has(name);
			box.addEventListener("change", () => {
				const picked = Array.from(container.querySelectorAll<HTMLInputElement>("input:checked")).map(
					(input) => input.value,
				);
				onChange(picked);
			});
			label.append(box, document.createTextNode(name));
			container.append(label);
		}
	}

	private syncControls(): void {
		el<HTMLInputElement>(`kind-${this.state.kind}`).checked = true;
		const input = el<HTMLInputElement>("threshold-input");
		if (document.activeElement !== input) input.value = String(this.state.thresholdM);
		el<HTMLInputElement>("overlay-centrality").checked = this.state.showCentrality;
		el<HTMLInputElement>("overlay-suggestions").checked = this.state.showSuggestions;
	}

	private applyPayload(payload: AnalysisPayload): void {
		const heatModel = choroplethModel(payload.heatmap);
		const bounds = boundsOfGeometries(heatModel.cells.map((cell) => cell.geometry));
		if (bounds !== null) {
			this.projection = new Projection(bounds, MAP_WIDTH, MAP_HEIGHT);
		}
		if (this.projection === null) {
			el<HTMLElement>("map-notice").textContent = "no boundary data to draw";
			return;
		}
		renderChoropleth(svgLayer("choropleth-layer"), heatModel, this.projection);
		renderLegend(el<HTMLElement>("legend"), legendModel(heatModel));

		const model = violationsModel(payload.violations);
		this.markerById = renderMarkers(svgLayer("marker-layer"), model.markers, this.projection);
		renderList(el<HTMLElement>("violation-list"), model.rows, model.notice, (row) => this.panTo(row.facilityId));
		el<HTMLElement>("violation-count").textContent =
			`${model.count} violations / ${payload.violations.totals.facilities_checked} checked`;
		el<HTMLElement>("map-notice").textContent = heatModel.empty ? "empty collection" : "";
	}

	private panTo(facilityId: string): void {
		const marker = this.markerById.get(facilityId);
		if (!marker) return;
		const svg = el<HTMLElement>("map") as unknown as SVGSVGElement;
		const cx = Number(marker.getAttribute("cx"));
		const cy = Number(marker.getAttribute("cy"));
		const zoomed = MAP_WIDTH / 2.5;
		svg.setAttribute(
			"viewBox",
			`${cx - zoomed / 2} ${cy - (zoomed * MAP_HEIGHT) / MAP_WIDTH / 2} ${zoomed} ${(zoomed * MAP_HEIGHT) / MAP_WIDTH}`,
		);
		marker.classList.add("selected");
		setTimeout(() => marker.classList.remove("selected"), 1500);
	}

	private async refreshOverlays(): Promise<void> {
		const layer = svgLayer("overlay-layer");
		layer.replaceChildren();
		if (this.projection === null) return;
		const query = stateToQuery(this.state);
		if (this.state.showCentrality) {
			const response = (await this.fetchJson(`/api/centrality?${query}`)) as CentralityResponse;
			for (const object of response.objects) {
				const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
				circle.setAttribute("cx", this.projection.x(object.lon).toFixed(2));
				circle.setAttribute("cy", this.projection.y(object.lat).toFixed(2));
				circle.setAttribute("r", String(3 + 6 * object.normalized));
				circle.setAttribute("class", "centrality-object");
				layer.append(circle);
			}
		}
		if (this.state.showSuggestions) {
			const response = (await this.fetchJson(`/api/suggestions?${query}`)) as SuggestionsResponse;
			for (const suggestion of response.suggestions) {
				const marker = document.createElementNS("http://www.w3.org/2000/svg", "rect");
				const x = this.projection.x(suggestion.location.lon);
				const y = this.projection.y(suggestion.location.lat);
				marker.setAttribute("x", (x - 5).toFixed(2));
				marker.setAttribute("y", (y - 5).toFixed(2));
				marker.setAttribute("width", "10");
				marker.setAttribute("height", "10");
				marker.setAttribute("class", "suggestion-marker");
				layer.append(marker);
			}
		}
	}

	private showError(message: string): void {
		el<HTMLElement>("map-notice").textContent = message;
	}
}

new ExplorerApp().start().catch((error) => {
	const notice = document.getElementById("map-notice");
	if (notice) notice.textContent = `failed to load: ${error}`;
});
