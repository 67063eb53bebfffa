// Thin DOM layer over the view models: SVG map, marker layer, side list.

import { Projection } from "./projection.js";
import type { HeatmapGeometry, Position } from "./types.js";
import type { ChoroplethModel, LegendModel, MarkerModel, RowModel } from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function ringPath(ring: Position[], proj: Projection): string {
	return (
		ring
			.map((p, i) => {
				const [x, y] = proj.point(p);
				return `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`;
			})
			.join("") + "Z"
	);
}

function geometryPath(geometry: HeatmapGeometry, proj: Projection): string {
	if (geometry.type === "Polygon") {
		return geometry.coordinates.map((ring) => ringPath(ring, proj)).join("");
	}
	if (geometry.type === "MultiPolygon") {
		return geometry.coordinates
			.map((part) => part.map((ring) => ringPath(ring, proj)).join(""))
			.join("");
	}
	return ""; // points are rendered as circles, not paths
}

export function renderChoropleth(
	layer: SVGGElement,
	model: ChoroplethModel,
	proj: Projection,
): void {
	layer.replaceChildren();
	for (const cell of model.cells) {
		if (cell.geometry.type === "Point") {
			const [x, y] = proj.point(cell.geometry.coordinates);
			const circle = document.createElementNS(SVG_NS, "circle");
			circle.setAttribute("cx", x.toFixed(2));
			circle.setAttribute("cy", y.toFixed(2));
			circle.setAttribute("r", "10");
			circle.setAttribute("fill", cell.fill);
			circle.setAttribute("class", "region-point");
			circle.append(titleFor(cell.name, cell.count));
			layer.append(circle);
			continue;
		}
		const path = document.createElementNS(SVG_NS, "path");
		path.setAttribute("d", geometryPath(cell.geometry, proj));
		path.setAttribute("fill", cell.fill);
		path.setAttribute("class", "region");
		path.append(titleFor(cell.name, cell.count));
		layer.append(path);
	}
}

function titleFor(name: string, count: number): SVGTitleElement {
	const title = document.createElementNS(SVG_NS, "title");
	title.textContent = `${name}: ${count} violations`;
	return title;
}

export function renderMarkers(
	layer: SVGGElement,
	markers: MarkerModel[],
	proj: Projection,
): Map<string, SVGCircleElement> {
	layer.replaceChildren();
	const byId = new Map<string, SVGCircleElement>();
	for (const marker of markers) {
		const circle = document.createElementNS(SVG_NS, "circle");
		circle.setAttribute("cx", proj.x(marker.lon).toFixed(2));
		circle.setAttribute("cy", proj.y(marker.lat).toFixed(2));
		circle.setAttribute("r", "3.5");
		circle.setAttribute("class", "marker");
		const title = document.createElementNS(SVG_NS, "title");
		title.textContent = marker.label;
		circle.append(title);
		layer.append(circle);
		byId.set(marker.facilityId, circle);
	}
	return byId;
}

export function renderList(
	container: HTMLElement,
	rows: RowModel[],
	notice: string | null,
	onSelect: (row: RowModel) => void,
): void {
	container.replaceChildren();
	if (notice !== null) {
		const div = document.createElement("div");
		div.className = "notice";
		div.textContent = notice;
		container.append(div);
		return;
	}
	for (const row of rows) {
		const item = document.createElement("div");
		item.className = "violation-row";
		const title = document.createElement("strong");
		title.textContent = row.name;
		const detail = document.createElement("span");
		detail.textContent = ` ${row.facilityType} — ${row.neighborhood} — ${row.nearestText}`;
		item.append(title, detail);
		item.addEventListener("click", () => onSelect(row));
		container.append(item);
	}
}

export function renderLegend(container: HTMLElement, legend: LegendModel): void {
	container.replaceChildren();
	const min = document.createElement("span");
	min.textContent = legend.minLabel;
	container.append(min);
	for (const stop of legend.stops) {
		const swatch = document.createElement("span");
		swatch.className = "swatch";
		swatch.style.background = stop.fill;
		container.append(swatch);
	}
	const max = document.createElement("span");
	max.textContent = legend.maxLabel;
	container.append(max);
}
