// Payload shapes of the analysis API this explorer consumes.

export type RuleKind = "hydrant" | "shelter";

export interface RuleInfo {
	kind: RuleKind;
	threshold_m: number;
	label: string;
	exclude_types: string[];
}

export interface ViolationEntry {
	facility_id: string;
	name: string;
	facility_type: string;
	neighborhood: string;
	location: { lat: number; lon: number };
	nearest_object_id: string | null;
	nearest_distance_m: number | null;
}

export interface ViolationsResponse {
	params: {
		kind: RuleKind;
		threshold_m: number;
		neighborhood: string[];
		facility_type: string[];
	};
	unknown: { neighborhood: string[]; facility_type: string[] };
	rule: RuleInfo;
	totals: { facilities_checked: number; violation_count: number };
	violations: ViolationEntry[];
	by_neighborhood: Record<string, number>;
	by_type: Record<string, Record<string, number>>;
}

export interface HeatmapProperties {
	name: string;
	violation_count: number;
	facilities_checked: number;
	rule_kind: RuleKind;
	threshold_m: number;
}

export type Position = [number, number]; // GeoJSON order: [lon, lat]

export interface PolygonGeometry {
	type: "Polygon";
	coordinates: Position[][];
}

export interface MultiPolygonGeometry {
	type: "MultiPolygon";
	coordinates: Position[][][];
}

export interface PointGeometry {
	type: "Point";
	coordinates: Position;
}

export type HeatmapGeometry = PolygonGeometry | MultiPolygonGeometry | PointGeometry;

export interface HeatmapFeature {
	type: "Feature";
	properties: HeatmapProperties;
	geometry: HeatmapGeometry;
}

export interface HeatmapDocument {
	type: "FeatureCollection";
	features: HeatmapFeature[];
}

export interface BoundaryFeature {
	type: "Feature";
	properties: { name: string };
	geometry: PolygonGeometry;
}

export interface BoundariesDocument {
	type: "FeatureCollection";
	features: BoundaryFeature[];
}

export interface MetaResponse {
	counts: { facilities: number; hydrants: number; shelters: number };
	neighborhoods: string[];
	facility_types: string[];
	rule_presets: Record<RuleKind, number>;
	source: string;
	data_timestamp: string;
}

export interface CentralityObject {
	id: string;
	kind: RuleKind;
	lat: number;
	lon: number;
	degree: number;
	normalized: number;
}

export interface CentralityResponse {
	params: Record<string, unknown>;
	objects: CentralityObject[];
}

export interface PlacementSuggestion {
	location: { lat: number; lon: number };
	covered_count: number;
	covered_facility_ids: string[];
}

export interface SuggestionsResponse {
	params: Record<string, unknown>;
	rule: RuleInfo;
	suggestions: PlacementSuggestion[];
}
