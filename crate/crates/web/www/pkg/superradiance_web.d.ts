/* tslint:disable */
/* eslint-disable */

/**
 * Sampled curves sharing one time axis (`γt`).
 */
export class Curves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    gammaT(): Float64Array;
    label(index: number): string;
    note(index: number): string;
    seriesCount(): number;
    series(index: number): Float64Array;
}

export function cascadeCoefficients(atoms: number): string;

export function cascadeCurves(atoms: number, gamma: number, clicks: Float64Array, t_stop: number, points: number): Curves;

export function smallSampleCurves(atoms: Uint32Array, gamma: number, t_stop: number, points: number): Curves;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curves_free: (a: number, b: number) => void;
    readonly cascadeCoefficients: (a: number) => [number, number, number, number];
    readonly cascadeCurves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly curves_gammaT: (a: number) => [number, number];
    readonly curves_label: (a: number, b: number) => [number, number];
    readonly curves_note: (a: number, b: number) => [number, number];
    readonly curves_series: (a: number, b: number) => [number, number];
    readonly curves_seriesCount: (a: number) => number;
    readonly smallSampleCurves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
