/* tslint:disable */
/* eslint-disable */

/**
 * Slider settings shared by every operation.
 */
export class Params {
    free(): void;
    [Symbol.dispose](): void;
    constructor(n: number, beta: number, inr_db: number, scr_db: number, rho_min_db: number, incoherent: boolean, noise_corr: number);
    beta: number;
    incoherent: boolean;
    inr_db: number;
    n: number;
    /**
     * Radar noise correlation `r` in `r^|i-j|`; zero means white.
     */
    noise_corr: number;
    rho_min_db: number;
    scr_db: number;
}

/**
 * Optimal joint design at the current settings.
 */
export class Solution {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    cr: number;
    epsilon: number;
    feasible: boolean;
    gamma_n: number;
    r0: number;
    r1: number;
    rho_max_db: number;
    sinr_db: number;
}

export function boundary(p: Params, betas: number): Float64Array;

/**
 * Linear value of a dB figure, for the page's readouts.
 */
export function dbToLinear(db: number): number;

export function solve(p: Params): Solution;

export function sweepRho(p: Params, from_db: number, to_db: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_params_beta: (a: number) => number;
    readonly __wbg_get_params_incoherent: (a: number) => number;
    readonly __wbg_get_params_inr_db: (a: number) => number;
    readonly __wbg_get_params_n: (a: number) => number;
    readonly __wbg_get_params_noise_corr: (a: number) => number;
    readonly __wbg_get_params_rho_min_db: (a: number) => number;
    readonly __wbg_get_params_scr_db: (a: number) => number;
    readonly __wbg_get_solution_epsilon: (a: number) => number;
    readonly __wbg_get_solution_feasible: (a: number) => number;
    readonly __wbg_get_solution_gamma_n: (a: number) => number;
    readonly __wbg_params_free: (a: number, b: number) => void;
    readonly __wbg_set_params_beta: (a: number, b: number) => void;
    readonly __wbg_set_params_incoherent: (a: number, b: number) => void;
    readonly __wbg_set_params_inr_db: (a: number, b: number) => void;
    readonly __wbg_set_params_n: (a: number, b: number) => void;
    readonly __wbg_set_params_noise_corr: (a: number, b: number) => void;
    readonly __wbg_set_params_rho_min_db: (a: number, b: number) => void;
    readonly __wbg_set_params_scr_db: (a: number, b: number) => void;
    readonly __wbg_set_solution_epsilon: (a: number, b: number) => void;
    readonly __wbg_set_solution_feasible: (a: number, b: number) => void;
    readonly __wbg_set_solution_gamma_n: (a: number, b: number) => void;
    readonly __wbg_solution_free: (a: number, b: number) => void;
    readonly boundary: (a: number, b: number) => [number, number, number, number];
    readonly dbToLinear: (a: number) => number;
    readonly params_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => number;
    readonly solve: (a: number) => [number, number, number];
    readonly sweepRho: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbg_get_solution_cr: (a: number) => number;
    readonly __wbg_get_solution_r0: (a: number) => number;
    readonly __wbg_get_solution_r1: (a: number) => number;
    readonly __wbg_get_solution_rho_max_db: (a: number) => number;
    readonly __wbg_get_solution_sinr_db: (a: number) => number;
    readonly __wbg_set_solution_cr: (a: number, b: number) => void;
    readonly __wbg_set_solution_r0: (a: number, b: number) => void;
    readonly __wbg_set_solution_r1: (a: number, b: number) => void;
    readonly __wbg_set_solution_rho_max_db: (a: number, b: number) => void;
    readonly __wbg_set_solution_sinr_db: (a: number, b: number) => void;
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
