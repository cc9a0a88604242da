export { parseCsv, numericColumn } from "./csv";
export type { Table } from "./csv";
export { KINDS, render } from "./plots";
export type { Kind } from "./plots";
export { runCli, USAGE } from "./cli";
