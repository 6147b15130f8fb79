/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_spectrumresult_free: (a: number, b: number) => void;
export const __wbg_waveresult_free: (a: number, b: number) => void;
export const simulate_wave: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const spectrum: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const spectrumresult_im: (a: number) => [number, number];
export const spectrumresult_re: (a: number) => [number, number];
export const spectrumresult_summary: (a: number) => [number, number];
export const structure_check: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const waveresult_exact_p: (a: number) => [number, number];
export const waveresult_exact_q: (a: number) => [number, number];
export const waveresult_hamiltonian: (a: number) => [number, number];
export const waveresult_l2_error: (a: number) => number;
export const waveresult_p: (a: number) => [number, number];
export const waveresult_q: (a: number) => [number, number];
export const waveresult_snapshot_time: (a: number) => number;
export const waveresult_times: (a: number) => [number, number];
export const waveresult_z: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
