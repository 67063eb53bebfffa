// Equirectangular projection of a lat/lon bounding box into SVG user units.

import type { HeatmapGeometry, Position } from "./types.js";

export interface Bounds {
	minLat: number;
	minLon: number;
	maxLat: number;
	maxLon: number;
}

export function emptyBounds(): Bounds {
	return { minLat: Infinity, minLon: Infinity, maxLat: -Infinity, maxLon: -Infinity };
}

export function extendBounds(bounds: Bounds, position: Position): void {
	const [lon, lat] = position;
	bounds.minLat = Math.min(bounds.minLat, lat);
	bounds.maxLat = Math.max(bounds.maxLat, lat);
	bounds.minLon = Math.min(bounds.minLon, lon);
	bounds.maxLon = Math.max(bounds.maxLon, lon);
}

export function boundsOfGeometries(geometries: HeatmapGeometry[]): Bounds | null {
	const bounds = emptyBounds();
	for (const geometry of geometries) {
		if (geometry.type === "Point") {
			extendBounds(bounds, geometry.coordinates);
		} else if (geometry.type === "Polygon") {
			for (const ring of geometry.coordinates) for (const p of ring) extendBounds(bounds, p);
		} else {
			for (const part of geometry.coordinates)
				for (const ring of part) for (const p of ring) extendBounds(bounds, p);
		}
	}
	return Number.isFinite(bounds.minLat) ? bounds : null;
}

/**
 * Maps lon/lat into a width x height viewport, preserving local aspect by
 * shrinking longitude with cos(mid-latitude). City extents are small enough
 * that this flat projection is visually exact.
 */
export class Projection {
	private readonly scale: number;
	private readonly cosMid: number;
	private readonly offsetX: number;
	private readonly offsetY: number;

	constructor(
		readonly bounds: Bounds,
		readonly width: number,
		readonly height: number,
		padding = 12,
	) {
		const midLat = (bounds.minLat + bounds.maxLat) / 2;
		this.cosMid = Math.max(Math.cos((midLat * Math.PI) / 180), 1e-6);
		const spanX = Math.max((bounds.maxLon - bounds.minLon) * this.cosMid, 1e-9);
		const spanY = Math.max(bounds.maxLat - bounds.minLat, 1e-9);
		this.scale = Math.min((width - 2 * padding) / spanX, (height - 2 * padding) / spanY);
		this.offsetX = (width - spanX * this.scale) / 2;
		this.offsetY = (height - spanY * this.scale) / 2;
	}

	x(lon: number): number {
		return this.offsetX + (lon - this.bounds.minLon) * this.cosMid * this.scale;
	}

	y(lat: number): number {
		return this.offsetY + (this.bounds.maxLat - lat) * this.scale;
	}

	point(position: Position): [number, number] {
		return [this.x(position[0]), this.y(position[1])];
	}
}
