import { describe, expect, it } from "vitest";

import { diffWords } from "../src/diff";

describe("diffWords", () => {
  it("marks an inserted keyword", () => {
    const segments = diffWords(
      "The frame rate of the camera is 60 Hz",
      "The frame rate of the camera MUST be 60 Hz",
    );
    const added = segments.filter((s) => s.kind === "added").map((s) => s.text.trim());
    const removed = segments.filter((s) => s.kind === "removed").map((s) => s.text.trim());
    expect(added.join(" ")).toContain("MUST");
    expect(removed.join(" ")).toContain("is");
  });

  it("reassembles both sides", () => {
    const before = "Low beam illuminant shall be LED.";
    const after = "Low beam illuminant MUST be LED.";
    const segments = diffWords(before, after);
    const rebuiltBefore = segments
      .filter((s) => s.kind !== "added")
      .map((s) => s.text)
      .join("");
    const rebuiltAfter = segments
      .filter((s) => s.kind !== "removed")
      .map((s) => s.text)
      .join("");
    expect(rebuiltBefore).toBe(before);
    expect(rebuiltAfter).toBe(after);
  });

  it("treats identical inputs as one same-segment", () => {
    expect(diffWords("IF: a, THEN: b.", "IF: a, THEN: b.")).toEqual([
      { kind: "same", text: "IF: a, THEN: b." },
    ]);
  });

  it("handles empty sides", () => {
    expect(diffWords("", "new text")).toEqual([{ kind: "added", text: "new text" }]);
    expect(diffWords("old", "")).toEqual([{ kind: "removed", text: "old" }]);
  });
});
