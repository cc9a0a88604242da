/** Argument handling for the `plot` executable. */

import { readFileSync, writeFileSync } from "node:fs";
import { parseCsv } from "./csv";
import { KINDS, Kind, render } from "./plots";

export const USAGE = `usage: plot <kind> <in.csv> <out.svg>
kinds: ${KINDS.join(", ")}
`;

/**
 * Run one plot command; returns the process exit code.
 *
 * 0 on success (an empty table still succeeds and draws bare axes),
 * 1 on unreadable input, a schema problem or an unwritable output,
 * 2 on bad usage.
 */
export function runCli(argv: string[]): number {
  if (argv.length !== 3) {
    process.stderr.write(USAGE);
    return 2;
  }
  const [kind, inPath, outPath] = argv;
  if (!(KINDS as readonly string[]).includes(kind)) {
    process.stderr.write(
      `error: unknown kind "${kind}"; expected one of ${KINDS.join(", ")}\n`
    );
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(inPath, "utf8");
  } catch (err) {
    process.stderr.write(`error: cannot read ${inPath}: ${message(err)}\n`);
    return 1;
  }
  let svg: string;
  try {
    svg = render(kind as Kind, parseCsv(text));
  } catch (err) {
    process.stderr.write(`error: ${inPath}: ${message(err)}\n`);
    return 1;
  }
  try {
    writeFileSync(outPath, svg);
  } catch (err) {
    process.stderr.write(`error: cannot write ${outPath}: ${message(err)}\n`);
    return 1;
  }
  return 0;
}

function message(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
