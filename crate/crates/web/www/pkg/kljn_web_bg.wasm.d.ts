/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_peestimate_p_ei: (a: number) => number;
export const __wbg_get_peestimate_p_ev: (a: number) => number;
export const __wbg_get_peestimate_se_i: (a: number) => number;
export const __wbg_get_peestimate_se_v: (a: number) => number;
export const __wbg_get_peestimate_trials: (a: number) => number;
export const __wbg_peestimate_free: (a: number, b: number) => void;
export const __wbg_set_peestimate_p_ei: (a: number, b: number) => void;
export const __wbg_set_peestimate_p_ev: (a: number, b: number) => void;
export const __wbg_set_peestimate_se_i: (a: number, b: number) => void;
export const __wbg_set_peestimate_se_v: (a: number, b: number) => void;
export const __wbg_set_peestimate_trials: (a: number, b: number) => void;
export const __wbg_stepresponse_free: (a: number, b: number) => void;
export const __wbg_waveforms_free: (a: number, b: number) => void;
export const bep_waveforms: (a: number, b: number, c: bigint, d: number) => [number, number, number];
export const estimate_pe: (a: number, b: number, c: bigint, d: number) => [number, number, number];
export const step_response: (a: number, b: number, c: number) => [number, number, number];
export const stepresponse_max_error: (a: number) => number;
export const stepresponse_oracle_load: (a: number) => [number, number];
export const stepresponse_oracle_src: (a: number) => [number, number];
export const stepresponse_simulated_load: (a: number) => [number, number];
export const stepresponse_simulated_src: (a: number) => [number, number];
export const stepresponse_time: (a: number) => [number, number];
export const waveforms_i_a: (a: number) => [number, number];
export const waveforms_i_b: (a: number) => [number, number];
export const waveforms_time: (a: number) => [number, number];
export const waveforms_v_a: (a: number) => [number, number];
export const waveforms_v_b: (a: number) => [number, number];
export const waveforms_fly_time: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
