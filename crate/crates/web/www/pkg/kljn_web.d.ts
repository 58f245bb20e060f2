/* tslint:disable */
/* eslint-disable */

export class PeEstimate {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    p_ei: number;
    p_ev: number;
    se_i: number;
    se_v: number;
    trials: number;
}

export class StepResponse {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    oracle_load(): Float64Array;
    oracle_src(): Float64Array;
    simulated_load(): Float64Array;
    simulated_src(): Float64Array;
    time(): Float64Array;
    /**
     * Largest relative deviation between simulation and bounce diagram.
     */
    readonly max_error: number;
}

export class Waveforms {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    i_a(): Float64Array;
    i_b(): Float64Array;
    time(): Float64Array;
    v_a(): Float64Array;
    v_b(): Float64Array;
    readonly fly_time: number;
}

/**
 * Cable voltages and currents of one bit exchange over `flights` fly times.
 */
export function bep_waveforms(scenario: number, hl: boolean, seed: bigint, flights: number): Waveforms;

/**
 * Eve's success probability at `tau = flights * t_f`.
 */
export function estimate_pe(scenario: number, trials: number, seed: bigint, flights: number): PeEstimate;

/**
 * Unit step behind `r_src` into a line terminated by `r_load`, next to
 * the bounce-diagram prediction.
 */
export function step_response(r_src: number, r_load: number, flights: number): StepResponse;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_peestimate_p_ei: (a: number) => number;
    readonly __wbg_get_peestimate_p_ev: (a: number) => number;
    readonly __wbg_get_peestimate_se_i: (a: number) => number;
    readonly __wbg_get_peestimate_se_v: (a: number) => number;
    readonly __wbg_get_peestimate_trials: (a: number) => number;
    readonly __wbg_peestimate_free: (a: number, b: number) => void;
    readonly __wbg_set_peestimate_p_ei: (a: number, b: number) => void;
    readonly __wbg_set_peestimate_p_ev: (a: number, b: number) => void;
    readonly __wbg_set_peestimate_se_i: (a: number, b: number) => void;
    readonly __wbg_set_peestimate_se_v: (a: number, b: number) => void;
    readonly __wbg_set_peestimate_trials: (a: number, b: number) => void;
    readonly __wbg_stepresponse_free: (a: number, b: number) => void;
    readonly __wbg_waveforms_free: (a: number, b: number) => void;
    readonly bep_waveforms: (a: number, b: number, c: bigint, d: number) => [number, number, number];
    readonly estimate_pe: (a: number, b: number, c: bigint, d: number) => [number, number, number];
    readonly step_response: (a: number, b: number, c: number) => [number, number, number];
    readonly stepresponse_max_error: (a: number) => number;
    readonly stepresponse_oracle_load: (a: number) => [number, number];
    readonly stepresponse_oracle_src: (a: number) => [number, number];
    readonly stepresponse_simulated_load: (a: number) => [number, number];
    readonly stepresponse_simulated_src: (a: number) => [number, number];
    readonly stepresponse_time: (a: number) => [number, number];
    readonly waveforms_i_a: (a: number) => [number, number];
    readonly waveforms_i_b: (a: number) => [number, number];
    readonly waveforms_time: (a: number) => [number, number];
    readonly waveforms_v_a: (a: number) => [number, number];
    readonly waveforms_v_b: (a: number) => [number, number];
    readonly waveforms_fly_time: (a: number) => number;
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
