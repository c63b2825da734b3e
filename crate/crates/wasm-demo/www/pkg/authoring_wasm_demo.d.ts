/* tslint:disable */
/* eslint-disable */

/**
 * Authors a bundled sentence given by its text, or every sentence of
 * CoNLL-U input.
 */
export function author(input: string): string;

/**
 * Runs the factuality checks on the best parse of every sentence.
 */
export function check(conllu: string): string;

/**
 * Paraparses the best parse of every sentence; one entry per variant.
 */
export function rewrite(conllu: string): string;

/**
 * Extended CoNLL-U of the bundled sentence with this text.
 */
export function sample_conllu(sentence: string): string;

/**
 * Texts of the bundled sentences.
 */
export function sentences(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly author: (a: number, b: number) => [number, number];
    readonly check: (a: number, b: number) => [number, number];
    readonly rewrite: (a: number, b: number) => [number, number];
    readonly sample_conllu: (a: number, b: number) => [number, number];
    readonly sentences: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
