import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { parseCsv } from "../src/csv";
import { KINDS, Kind, render } from "../src/plots";

const GOLDEN = join(__dirname, "..", "golden");

function golden(kind: Kind) {
  return parseCsv(readFileSync(join(GOLDEN, `${kind}.csv`), "utf8"));
}

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("golden tables", () => {
  it("renders every kind to a well-formed document", () => {
    for (const kind of KINDS) {
      const svg = render(kind, golden(kind));
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.endsWith("</svg>\n")).toBe(true);
      expect(count(svg, "<svg ")).toBe(1);
    }
  });

  it("draws one line per trace column for zeeman, with readable labels", () => {
    const svg = render("zeeman", golden("zeeman"));
    expect(count(svg, "<polyline ")).toBe(8);
    expect(svg).toContain("Jz=+6, mI=+3/2");
    expect(svg).toContain("Jz=-6, mI=-3/2");
    expect(svg).toContain("field (mT)");
    expect(svg).toContain("E/h (GHz)");
  });

  it("draws one bar per histogram bin", () => {
    const table = golden("histogram");
    const svg = render("histogram", table);
    // one background rect, one frame rect, then the bars
    expect(count(svg, "<rect ")).toBe(table.rows.length + 2);
    expect(svg).toContain("count");
  });

  it("draws a single population trace for rabi and ramsey", () => {
    for (const kind of ["rabi", "ramsey"] as const) {
      const svg = render(kind, golden(kind));
      expect(count(svg, "<polyline ")).toBe(1);
      expect(svg).toContain("time (s)");
      expect(svg).toContain("population");
    }
  });

  it("draws four labeled traces for grover", () => {
    const svg = render("grover", golden("grover"));
    expect(count(svg, "<polyline ")).toBe(4);
    for (const label of ["+3/2", "+1/2", "-1/2", "-3/2"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });

  it("is byte-stable across repeated renders", () => {
    for (const kind of KINDS) {
      const table = golden(kind);
      expect(render(kind, table)).toBe(render(kind, golden(kind)));
    }
  });
});

describe("schema errors", () => {
  it("names a missing x column", () => {
    expect(() => render("rabi", parseCsv("t,population\n0,1\n"))).toThrow(
      'missing column "time_s"'
    );
  });

  it("names the missing grover population column", () => {
    const header =
      "time_s,population_p32,population_p12,population_m32\n0,1,0,0\n";
    expect(() => render("grover", parseCsv(header))).toThrow(
      'missing column "population_m12"'
    );
  });

  it("names the missing histogram columns", () => {
    expect(() => render("histogram", parseCsv("bin_center_mT\n0\n"))).toThrow(
      'missing column "count"'
    );
  });

  it("rejects a zeeman table with no trace columns", () => {
    expect(() => render("zeeman", parseCsv("field_mT\n0\n"))).toThrow(
      /no trace columns ending in "_GHz"/
    );
  });

  it("names the column holding a bad cell", () => {
    expect(() =>
      render("ramsey", parseCsv("time_s,population\n0,ok\n"))
    ).toThrow('column "population" row 1: not a number: "ok"');
  });
});

describe("empty tables", () => {
  it("renders bare axes when only the header is present", () => {
    const svg = render("rabi", parseCsv("time_s,population\n"));
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(count(svg, "<polyline ")).toBe(0);
    expect(svg).toContain("time (s)");
  });

  it("renders bare axes for an empty histogram", () => {
    const svg = render("histogram", parseCsv("bin_center_mT,count\n"));
    expect(count(svg, "<rect")).toBe(2);
  });

  it("plots a lone data point as a dot", () => {
    const svg = render("rabi", parseCsv("time_s,population\n0,0.5\n"));
    expect(count(svg, "<circle ")).toBe(1);
    expect(count(svg, "<polyline ")).toBe(0);
  });
});
