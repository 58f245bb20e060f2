/* @ts-self-types="./kljn_web.d.ts" */

export class PeEstimate {
    static __wrap(ptr) {
        const obj = Object.create(PeEstimate.prototype);
        obj.__wbg_ptr = ptr;
        PeEstimateFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        PeEstimateFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_peestimate_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get p_ei() {
        const ret = wasm.__wbg_get_peestimate_p_ei(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get p_ev() {
        const ret = wasm.__wbg_get_peestimate_p_ev(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get se_i() {
        const ret = wasm.__wbg_get_peestimate_se_i(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get se_v() {
        const ret = wasm.__wbg_get_peestimate_se_v(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get trials() {
        const ret = wasm.__wbg_get_peestimate_trials(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @param {number} arg0
     */
    set p_ei(arg0) {
        wasm.__wbg_set_peestimate_p_ei(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set p_ev(arg0) {
        wasm.__wbg_set_peestimate_p_ev(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set se_i(arg0) {
        wasm.__wbg_set_peestimate_se_i(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set se_v(arg0) {
        wasm.__wbg_set_peestimate_se_v(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set trials(arg0) {
        wasm.__wbg_set_peestimate_trials(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) PeEstimate.prototype[Symbol.dispose] = PeEstimate.prototype.free;

export class StepResponse {
    static __wrap(ptr) {
        const obj = Object.create(StepResponse.prototype);
        obj.__wbg_ptr = ptr;
        StepResponseFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        StepResponseFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_stepresponse_free(ptr, 0);
    }
    /**
     * Largest relative deviation between simulation and bounce diagram.
     * @returns {number}
     */
    get max_error() {
        const ret = wasm.stepresponse_max_error(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    oracle_load() {
        const ret = wasm.stepresponse_oracle_load(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    oracle_src() {
        const ret = wasm.stepresponse_oracle_src(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    simulated_load() {
        const ret = wasm.stepresponse_simulated_load(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    simulated_src() {
        const ret = wasm.stepresponse_simulated_src(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    time() {
        const ret = wasm.stepresponse_time(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) StepResponse.prototype[Symbol.dispose] = StepResponse.prototype.free;

export class Waveforms {
    static __wrap(ptr) {
        const obj = Object.create(Waveforms.prototype);
        obj.__wbg_ptr = ptr;
        WaveformsFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        WaveformsFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_waveforms_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get fly_time() {
        const ret = wasm.waveforms_fly_time(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    i_a() {
        const ret = wasm.waveforms_i_a(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    i_b() {
        const ret = wasm.waveforms_i_b(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    time() {
        const ret = wasm.waveforms_time(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    v_a() {
        const ret = wasm.waveforms_v_a(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    v_b() {
        const ret = wasm.waveforms_v_b(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) Waveforms.prototype[Symbol.dispose] = Waveforms.prototype.free;

/**
 * Cable voltages and currents of one bit exchange over `flights` fly times.
 * @param {number} scenario
 * @param {boolean} hl
 * @param {bigint} seed
 * @param {number} flights
 * @returns {Waveforms}
 */
export function bep_waveforms(scenario, hl, seed, flights) {
    const ret = wasm.bep_waveforms(scenario, hl, seed, flights);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Waveforms.__wrap(ret[0]);
}

/**
 * Eve's success probability at `tau = flights * t_f`.
 * @param {number} scenario
 * @param {number} trials
 * @param {bigint} seed
 * @param {number} flights
 * @returns {PeEstimate}
 */
export function estimate_pe(scenario, trials, seed, flights) {
    const ret = wasm.estimate_pe(scenario, trials, seed, flights);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return PeEstimate.__wrap(ret[0]);
}

/**
 * Unit step behind `r_src` into a line terminated by `r_load`, next to
 * the bounce-diagram prediction.
 * @param {number} r_src
 * @param {number} r_load
 * @param {number} flights
 * @returns {StepResponse}
 */
export function step_response(r_src, r_load, flights) {
    const ret = wasm.step_response(r_src, r_load, flights);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return StepResponse.__wrap(ret[0]);
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
        "./kljn_web_bg.js": import0,
    };
}

const PeEstimateFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_peestimate_free(ptr, 1));
const StepResponseFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_stepresponse_free(ptr, 1));
const WaveformsFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_waveforms_free(ptr, 1));

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
        module_or_path = new URL('kljn_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
