#!/usr/bin/env node
/**
 * plots render-all <results-dir> [--out <dir>]
 *
 * Renders every figure kind present in a simulator results directory.
 * Exit codes: 0 ok, 1 usage, 2 data/schema error.
 */

import { renderAll } from "./renderAll.js";

export function main(argv: string[]): number {
  const args = [...argv];
  const command = args.shift();
  if (command !== "render-all") {
    console.error("usage: plots render-all <results-dir> [--out <dir>]");
    return 1;
  }
  let resultsDir: string | undefined;
  let outDir: string | undefined;
  while (args.length > 0) {
    const tok = args.shift()!;
    if (tok === "--out") {
      outDir = args.shift();
      if (outDir === undefined) {
        console.error("--out requires a directory");
        return 1;
      }
    } else if (resultsDir === undefined) {
      resultsDir = tok;
    } else {
      console.error(`unexpected argument: ${tok}`);
      return 1;
    }
  }
  if (resultsDir === undefined) {
    console.error("usage: plots render-all <results-dir> [--out <dir>]");
    return 1;
  }
  try {
    const figures = renderAll(resultsDir, outDir);
    for (const fig of figures) {
      console.log(`${fig.kind} -> ${fig.path}`);
    }
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
