// Pure view models: everything the DOM layer draws is computed here, so the
// contract tests can verify counts and shading without a browser.

import type { HeatmapDocument, HeatmapGeometry, ViolationsResponse } from "./types.js";

export interface ChoroplethCell {
	name: string;
	count: number;
	checked: number;
	/** normalized shade in [0, 1]; 0 only for zero-count regions */
	shade: number;
	fill: string;
	isZero: boolean;
	geometry: HeatmapGeometry;
}

export interface ChoroplethModel {
	cells: ChoroplethCell[];
	minCount: number;
	maxCount: number;
	empty: boolean;
}

const ZERO_FILL = "#e4e7e4";

function sequentialFill(shade: number): string {
	// white-to-brick sequential ramp; opacity carries the signal
	const alpha = 0.15 + 0.85 * shade;
	return `rgba(178, 24, 43, ${alpha.toFixed(3)})`;
}

export function choroplethModel(doc: HeatmapDocument): ChoroplethModel {
	const counts = doc.features.map((f) => f.properties.violation_count);
	const maxCount = counts.length ? Math.max(...counts) : 0;
	const minCount = counts.length ? Math.min(...counts) : 0;
	const cells = doc.features.map((feature) => {
		const count = feature.properties.violation_count;
		const shade = maxCount > 0 ? count / maxCount : 0;
		return {
			name: feature.properties.name,
			count,
			checked: feature.properties.facilities_checked,
			shade,
			fill: count === 0 ? ZERO_FILL : sequentialFill(shade),
			isZero: count === 0,
			geometry: feature.geometry,
		};
	});
	return { cells, minCount, maxCount, empty: cells.length === 0 };
}

export interface MarkerModel {
	facilityId: string;
	lat: number;
	lon: number;
	label: string;
}

export interface RowModel {
	facilityId: string;
	name: string;
	facilityType: string;
	neighborhood: string;
	nearestText: string;
	lat: number;
	lon: number;
}

export interface ViolationsModel {
	markers: MarkerModel[];
	rows: RowModel[];
	count: number;
	/** shown instead of the list when there is nothing to show */
	notice: string | null;
}

export function violationsModel(response: ViolationsResponse): ViolationsModel {
	const markers = response.violations.map((v) => ({
		facilityId: v.facility_id,
		lat: v.location.lat,
		lon: v.location.lon,
		label: `${v.name} (${v.facility_type})`,
	}));
	const rows = response.violations.map((v) => ({
		facilityId: v.facility_id,
		name: v.name,
		facilityType: v.facility_type,
		neighborhood: v.neighborhood,
		nearestText:
			v.nearest_distance_m === null
				? "no object of this kind"
				: `${v.nearest_distance_m.toFixed(1)} m to ${v.nearest_object_id}`,
		lat: v.location.lat,
		lon: v.location.lon,
	}));
	return {
		markers,
		rows,
		count: response.totals.violation_count,
		notice: markers.length === 0 ? "no violations for the current selection" : null,
	};
}

export interface LegendModel {
	minLabel: string;
	maxLabel: string;
	stops: { shade: number; fill: string }[];
}

export function legendModel(model: ChoroplethModel): LegendModel {
	const stops = [0, 0.25, 0.5, 0.75, 1].map((shade) => ({
		shade,
		fill: shade === 0 && model.maxCount > 0 ? ZERO_FILL : sequentialFill(shade),
	}));
	return { minLabel: String(model.minCount), maxLabel: String(model.maxCount), stops };
}
