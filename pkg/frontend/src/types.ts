/** Wire formats of the analysis service. */

export type Ann = boolean | boolean[] | null;

export interface ValBase {
  k: string;
  ann?: Ann;
}

export interface IntVal extends ValBase { k: "int"; v: number }
export interface FloatVal extends ValBase { k: "float"; v: number }
export interface StrVal extends ValBase { k: "str"; v: string }
export interface BoolVal extends ValBase { k: "bool"; v: boolean }
export interface NilVal extends ValBase { k: "nil" }
export interface ConsVal extends ValBase { k: "cons"; head: Val; tail: Val }
export interface RecordVal extends ValBase { k: "record"; fields: [string, Val][] }
export interface MatrixVal extends ValBase {
  k: "matrix";
  rows: number;
  cols: number;
  cells: Val[][];
  rows_ann?: Ann;
  cols_ann?: Ann;
}
export interface HoleVal { k: "hole" }
export interface ClosureVal extends ValBase { k: "closure"; defs: string[] }

export type Val =
  | IntVal | FloatVal | StrVal | BoolVal | NilVal | ConsVal
  | RecordVal | MatrixVal | HoleVal | ClosureVal;

export type PathStep =
  | "head" | "tail" | "node" | "dims"
  | { field: string }
  | { index: number }
  | { cell: [number, number] };

export interface DocPath {
  path: PathStep[];
  ann?: Ann;
  in?: string;
}

export interface SelectionDoc {
  lattice?: string;
  paths: DocPath[];
}

export interface HighlightSpan {
  file: string;
  start: number;
  end: number;
  ann: Ann;
}

export interface SessionInfo {
  id: string;
  lattice: string;
  views: { name: string; source: string; file: string; result: Val }[];
  data: Record<string, Val>;
}

export interface BwdResponse {
  env: Record<string, Val>;
  env_doc: SelectionDoc;
  ambient: Ann;
  highlights: HighlightSpan[];
  marked_source: string;
}

export interface FwdResponse {
  output: Val;
  output_doc: SelectionDoc;
}

export interface LinkResponse {
  from: string;
  to: string;
  data: Record<string, Val>;
  other: Val;
  other_doc: SelectionDoc;
}
