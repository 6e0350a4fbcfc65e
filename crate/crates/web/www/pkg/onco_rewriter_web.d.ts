/* tslint:disable */
/* eslint-disable */

/**
 * Bundled example input by file name.
 */
export function fixture(name: string): string | undefined;

export function fixture_names(): string;

export function metrics(model: string, max_nodes: number): string;

/**
 * Generated ontology and thesaurus module as functional-syntax documents.
 */
export function ontology(model: string, thesaurus: string): string;

/**
 * Rewrites `query`, reporting every candidate with its stage outputs.
 */
export function rewrite(model: string, thesaurus: string, query: string, max_nodes: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly fixture: (a: number, b: number) => [number, number];
    readonly fixture_names: () => [number, number];
    readonly metrics: (a: number, b: number, c: number) => [number, number];
    readonly ontology: (a: number, b: number, c: number, d: number) => [number, number];
    readonly rewrite: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
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
