/** Comma-separated tables as written by the tbqudit command line driver. */

export interface Table {
  columns: string[];
  rows: string[][];
}

/**
 * Parse plain comma-separated text: first line is the header, no quoting
 * or escaping (the producer never emits either).
 *
 * Throws on empty input and on any row whose cell count differs from the
 * header's.
 */
export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new Error("empty input: no header row");
  }
  const columns = lines[0].split(",");
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `row ${i} has ${cells.length} cells, header has ${columns.length}`
      );
    }
    rows.push(cells);
  }
  return { columns, rows };
}

/** One column as finite numbers; every failure names the column. */
export function numericColumn(table: Table, name: string): number[] {
  const index = table.columns.indexOf(name);
  if (index < 0) {
    throw new Error(`missing column "${name}"`);
  }
  return table.rows.map((cells, i) => {
    const cell = cells[index];
    const value = Number(cell);
    if (cell.trim() === "" || !Number.isFinite(value)) {
      throw new Error(`column "${name}" row ${i + 1}: not a number: "${cell}"`);
    }
    return value;
  });
}
