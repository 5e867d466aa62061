// Word-level diff for the suggestion card: what would change if the
// engineer accepted the suggested DSL formulation.

export type SegmentKind = "same" | "removed" | "added";

export interface DiffSegment {
  kind: SegmentKind;
  text: string;
}

function splitWords(text: string): string[] {
  return text.split(/(\s+)/).filter((part) => part.length > 0);
}

/** Longest-common-subsequence diff over word tokens. */
export function diffWords(before: string, after: string): DiffSegment[] {
  const a = splitWords(before);
  const b = splitWords(after);
  const rows = a.length + 1;
  const cols = b.length + 1;
  const table = new Array<number>(rows * cols).fill(0);
  for (let i = a.length - 1; i >= 0; i--) {
    for (let j = b.length - 1; j >= 0; j--) {
      table[i * cols + j] =
        a[i] === b[j]
          ? table[(i + 1) * cols + j + 1] + 1
          : Math.max(table[(i + 1) * cols + j], table[i * cols + j + 1]);
    }
  }

  const segments: DiffSegment[] = [];
  const push = (kind: SegmentKind, text: string) => {
    const last = segments[segments.length - 1];
    if (last && last.kind === kind) {
      last.text += text;
    } else {
      segments.push({ kind, text });
    }
  };

  let i = 0;
  let j = 0;
  while (i < a.length && j < b.length) {
    if (a[i] === b[j]) {
      push("same", a[i]);
      i++;
      j++;
    } else if (table[(i + 1) * cols + j] >= table[i * cols + j + 1]) {
      push("removed", a[i]);
      i++;
    } else {
      push("added", b[j]);
      j++;
    }
  }
  while (i < a.length) push("removed", a[i++]);
  while (j < b.length) push("added", b[j++]);
  return segments;
}
