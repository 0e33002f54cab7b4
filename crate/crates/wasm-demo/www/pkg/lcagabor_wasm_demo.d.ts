/* tslint:disable */
/* eslint-disable */

/**
 * Report and full spectrum (JSON) of a family: `onb`, `fine` (refinement
 * `j`) or `section` (offset `j`), on `ModelSpace(m, k)`.
 */
export function frame_spectrum(p: number, modular: boolean, m: number, k: number, family: string, j: number): string;

/**
 * Density profile (JSON) of `section(outer, inner)` over scales `inner..=outer`.
 */
export function section_density(p: number, modular: boolean, outer: number, inner: number): string;

/**
 * Row-major `|V_g f|` with `g = chi_{A^scale H}` and a seeded random `f`;
 * the grid side is `p^(m+k)`.
 */
export function stft_magnitudes(p: number, modular: boolean, m: number, k: number, window_scale: number, seed: bigint): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly frame_spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly section_density: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly stft_magnitudes: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
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
