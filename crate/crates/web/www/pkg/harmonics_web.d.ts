/* tslint:disable */
/* eslint-disable */

/**
 * |B_R| for R = 0..=r_max in the catalog generators of `group`.
 */
export function growth(group: string, r_max: number): Float64Array;

/**
 * |ν̂(i/points)| for i = 0..=points. `composite` selects the recipe
 * vanishing on ⋃_{k≤m} (1/k)ℤ instead of (1/m)ℤ.
 */
export function nu_trace(m: number, composite: boolean, points: number): Float64Array;

/**
 * Atoms and weights of ν as alternating (value, weight) pairs.
 */
export function nu_weights(m: number, composite: boolean): Float64Array;

/**
 * τ(xᵏ) for k = 0..=k_max with x the simple random walk on `group`.
 */
export function return_probabilities(group: string, k_max: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly growth: (a: number, b: number, c: number) => [number, number, number, number];
    readonly nu_trace: (a: number, b: number, c: number) => [number, number, number, number];
    readonly nu_weights: (a: number, b: number) => [number, number, number, number];
    readonly return_probabilities: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
