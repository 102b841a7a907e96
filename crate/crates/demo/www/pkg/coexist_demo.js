/* @ts-self-types="./coexist_demo.d.ts" */

/**
 * Slider settings shared by every operation.
 */
export class Params {
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ParamsFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_params_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get beta() {
        const ret = wasm.__wbg_get_params_beta(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {boolean}
     */
    get incoherent() {
        const ret = wasm.__wbg_get_params_incoherent(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get inr_db() {
        const ret = wasm.__wbg_get_params_inr_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get n() {
        const ret = wasm.__wbg_get_params_n(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Radar noise correlation `r` in `r^|i-j|`; zero means white.
     * @returns {number}
     */
    get noise_corr() {
        const ret = wasm.__wbg_get_params_noise_corr(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get rho_min_db() {
        const ret = wasm.__wbg_get_params_rho_min_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get scr_db() {
        const ret = wasm.__wbg_get_params_scr_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} n
     * @param {number} beta
     * @param {number} inr_db
     * @param {number} scr_db
     * @param {number} rho_min_db
     * @param {boolean} incoherent
     * @param {number} noise_corr
     */
    constructor(n, beta, inr_db, scr_db, rho_min_db, incoherent, noise_corr) {
        const ret = wasm.params_new(n, beta, inr_db, scr_db, rho_min_db, incoherent, noise_corr);
        this.__wbg_ptr = ret;
        ParamsFinalization.register(this, this.__wbg_ptr, this);
        return this;
    }
    /**
     * @param {number} arg0
     */
    set beta(arg0) {
        wasm.__wbg_set_params_beta(this.__wbg_ptr, arg0);
    }
    /**
     * @param {boolean} arg0
     */
    set incoherent(arg0) {
        wasm.__wbg_set_params_incoherent(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set inr_db(arg0) {
        wasm.__wbg_set_params_inr_db(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set n(arg0) {
        wasm.__wbg_set_params_n(this.__wbg_ptr, arg0);
    }
    /**
     * Radar noise correlation `r` in `r^|i-j|`; zero means white.
     * @param {number} arg0
     */
    set noise_corr(arg0) {
        wasm.__wbg_set_params_noise_corr(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set rho_min_db(arg0) {
        wasm.__wbg_set_params_rho_min_db(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set scr_db(arg0) {
        wasm.__wbg_set_params_scr_db(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Params.prototype[Symbol.dispose] = Params.prototype.free;

/**
 * Optimal joint design at the current settings.
 */
export class Solution {
    static __wrap(ptr) {
        const obj = Object.create(Solution.prototype);
        obj.__wbg_ptr = ptr;
        SolutionFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        SolutionFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_solution_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get cr() {
        const ret = wasm.__wbg_get_solution_cr(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get epsilon() {
        const ret = wasm.__wbg_get_solution_epsilon(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {boolean}
     */
    get feasible() {
        const ret = wasm.__wbg_get_solution_feasible(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get gamma_n() {
        const ret = wasm.__wbg_get_solution_gamma_n(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get r0() {
        const ret = wasm.__wbg_get_solution_r0(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get r1() {
        const ret = wasm.__wbg_get_solution_r1(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get rho_max_db() {
        const ret = wasm.__wbg_get_solution_rho_max_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get sinr_db() {
        const ret = wasm.__wbg_get_solution_sinr_db(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set cr(arg0) {
        wasm.__wbg_set_solution_cr(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set epsilon(arg0) {
        wasm.__wbg_set_solution_epsilon(this.__wbg_ptr, arg0);
    }
    /**
     * @param {boolean} arg0
     */
    set feasible(arg0) {
        wasm.__wbg_set_solution_feasible(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma_n(arg0) {
        wasm.__wbg_set_solution_gamma_n(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set r0(arg0) {
        wasm.__wbg_set_solution_r0(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set r1(arg0) {
        wasm.__wbg_set_solution_r1(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set rho_max_db(arg0) {
        wasm.__wbg_set_solution_rho_max_db(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set sinr_db(arg0) {
        wasm.__wbg_set_solution_sinr_db(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Solution.prototype[Symbol.dispose] = Solution.prototype.free;

/**
 * @param {Params} p
 * @param {number} betas
 * @returns {Float64Array}
 */
export function boundary(p, betas) {
    _assertClass(p, Params);
    const ret = wasm.boundary(p.__wbg_ptr, betas);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Linear value of a dB figure, for the page's readouts.
 * @param {number} db
 * @returns {number}
 */
export function dbToLinear(db) {
    const ret = wasm.dbToLinear(db);
    return ret;
}

/**
 * @param {Params} p
 * @returns {Solution}
 */
export function solve(p) {
    _assertClass(p, Params);
    const ret = wasm.solve(p.__wbg_ptr);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Solution.__wrap(ret[0]);
}

/**
 * @param {Params} p
 * @param {number} from_db
 * @param {number} to_db
 * @param {number} points
 * @returns {Float64Array}
 */
export function sweepRho(p, from_db, to_db, points) {
    _assertClass(p, Params);
    const ret = wasm.sweepRho(p.__wbg_ptr, from_db, to_db, points);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_92b29b0548f8b746: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_344f42d3211c4765: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./coexist_demo_bg.js": import0,
    };
}

const ParamsFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_params_free(ptr, 1));
const SolutionFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_solution_free(ptr, 1));

function _assertClass(instance, klass) {
    if (!(instance instanceof klass)) {
        throw new Error(`expected instance of ${klass.name}`);
    }
}

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = module.ok && expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('coexist_demo_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
