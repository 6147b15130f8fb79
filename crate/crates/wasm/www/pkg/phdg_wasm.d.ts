/* tslint:disable */
/* eslint-disable */

export class SpectrumResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    im(): Float64Array;
    re(): Float64Array;
    summary(): string;
}

export class WaveResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    exact_p(): Float64Array;
    exact_q(): Float64Array;
    hamiltonian(): Float64Array;
    l2_error(): number;
    p(): Float64Array;
    q(): Float64Array;
    snapshot_time(): number;
    times(): Float64Array;
    z(): Float64Array;
}

export function simulate_wave(elements: number, degree: number, beta: number, tau: number, xi: number, t_final: number, dt: number, snapshot: number): WaveResult;

export function spectrum(elements: number, degree: number, beta: number, tau: number, xi: number, structure_only: boolean): SpectrumResult;

export function structure_check(elements: number, degree: number, beta: number, tau: number, xi: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_spectrumresult_free: (a: number, b: number) => void;
    readonly __wbg_waveresult_free: (a: number, b: number) => void;
    readonly simulate_wave: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly spectrumresult_im: (a: number) => [number, number];
    readonly spectrumresult_re: (a: number) => [number, number];
    readonly spectrumresult_summary: (a: number) => [number, number];
    readonly structure_check: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly waveresult_exact_p: (a: number) => [number, number];
    readonly waveresult_exact_q: (a: number) => [number, number];
    readonly waveresult_hamiltonian: (a: number) => [number, number];
    readonly waveresult_l2_error: (a: number) => number;
    readonly waveresult_p: (a: number) => [number, number];
    readonly waveresult_q: (a: number) => [number, number];
    readonly waveresult_snapshot_time: (a: number) => number;
    readonly waveresult_times: (a: number) => [number, number];
    readonly waveresult_z: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
