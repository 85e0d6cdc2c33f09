/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curves_free: (a: number, b: number) => void;
export const cascadeCoefficients: (a: number) => [number, number, number, number];
export const cascadeCurves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const curves_gammaT: (a: number) => [number, number];
export const curves_label: (a: number, b: number) => [number, number];
export const curves_note: (a: number, b: number) => [number, number];
export const curves_series: (a: number, b: number) => [number, number];
export const curves_seriesCount: (a: number) => number;
export const smallSampleCurves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
