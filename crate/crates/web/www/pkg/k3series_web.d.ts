/* tslint:disable */
/* eslint-disable */

/**
 * `{"h_max": .., "rows": [[n_{g,h} as strings]]}`.
 */
export function kkv_table(h_max: number): string;

/**
 * Ray series for one primitive class: records `{d, n, coefficient}` per series.
 */
export function ray_series(h0: bigint, d_max: bigint, q_min: bigint, q_max: bigint): string;

/**
 * VW extraction for `vw` given as `"num/den"` strings separated by commas.
 */
export function vw_check(chi0: bigint, vw: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly kkv_table: (a: number) => [number, number];
    readonly ray_series: (a: bigint, b: bigint, c: bigint, d: bigint) => [number, number];
    readonly vw_check: (a: bigint, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
