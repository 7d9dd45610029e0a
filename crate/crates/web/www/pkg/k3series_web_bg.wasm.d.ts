/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const kkv_table: (a: number) => [number, number];
export const ray_series: (a: bigint, b: bigint, c: bigint, d: bigint) => [number, number];
export const vw_check: (a: bigint, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
