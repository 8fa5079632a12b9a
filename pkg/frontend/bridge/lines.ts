/** Newline-delimited framing over a byte stream.
 *
 * TCP hands us arbitrary chunks; this accumulates them and yields complete
 * lines, holding any trailing partial line for the next chunk.
 */

export interface SplitResult {
  lines: string[];
  rest: string;
}

export function splitLines(rest: string, chunk: string): SplitResult {
  const data = rest + chunk;
  const parts = data.split("\n");
  const tail = parts.pop() ?? "";
  return { lines: parts.filter((line) => line.trim().length > 0), rest: tail };
}
