/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_params_beta: (a: number) => number;
export const __wbg_get_params_incoherent: (a: number) => number;
export const __wbg_get_params_inr_db: (a: number) => number;
export const __wbg_get_params_n: (a: number) => number;
export const __wbg_get_params_noise_corr: (a: number) => number;
export const __wbg_get_params_rho_min_db: (a: number) => number;
export const __wbg_get_params_scr_db: (a: number) => number;
export const __wbg_get_solution_epsilon: (a: number) => number;
export const __wbg_get_solution_feasible: (a: number) => number;
export const __wbg_get_solution_gamma_n: (a: number) => number;
export const __wbg_params_free: (a: number, b: number) => void;
export const __wbg_set_params_beta: (a: number, b: number) => void;
export const __wbg_set_params_incoherent: (a: number, b: number) => void;
export const __wbg_set_params_inr_db: (a: number, b: number) => void;
export const __wbg_set_params_n: (a: number, b: number) => void;
export const __wbg_set_params_noise_corr: (a: number, b: number) => void;
export const __wbg_set_params_rho_min_db: (a: number, b: number) => void;
export const __wbg_set_params_scr_db: (a: number, b: number) => void;
export const __wbg_set_solution_epsilon: (a: number, b: number) => void;
export const __wbg_set_solution_feasible: (a: number, b: number) => void;
export const __wbg_set_solution_gamma_n: (a: number, b: number) => void;
export const __wbg_solution_free: (a: number, b: number) => void;
export const boundary: (a: number, b: number) => [number, number, number, number];
export const dbToLinear: (a: number) => number;
export const params_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => number;
export const solve: (a: number) => [number, number, number];
export const sweepRho: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbg_get_solution_cr: (a: number) => number;
export const __wbg_get_solution_r0: (a: number) => number;
export const __wbg_get_solution_r1: (a: number) => number;
export const __wbg_get_solution_rho_max_db: (a: number) => number;
export const __wbg_get_solution_sinr_db: (a: number) => number;
export const __wbg_set_solution_cr: (a: number, b: number) => void;
export const __wbg_set_solution_r0: (a: number, b: number) => void;
export const __wbg_set_solution_r1: (a: number, b: number) => void;
export const __wbg_set_solution_rho_max_db: (a: number, b: number) => void;
export const __wbg_set_solution_sinr_db: (a: number, b: number) => void;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
