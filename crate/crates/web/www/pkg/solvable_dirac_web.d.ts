/* tslint:disable */
/* eslint-disable */

/**
 * Analytic level against the self-consistent finite-difference solve.
 */
export function oracle_check(model_json: string, n: number, l: number, points: number): string;

/**
 * Levels `eps` and `E = eps² - m²` for `n <= n_max`, `l <= l_max`.
 */
export function spectrum(model_json: string, n_max: number, l_max: number): string;

/**
 * Normalized `G(r)`, recovered `F(r)` and the effective potential of one state.
 */
export function wavefunction(model_json: string, n: number, l: number, points: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly oracle_check: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number) => [number, number];
    readonly wavefunction: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
