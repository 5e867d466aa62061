// DOM wiring for the smart editor. All verdicts come from the service; this
// file only renders session state and forwards user intents.

import { HttpServiceClient, type ServiceClient } from "./api";
import { panelEntries } from "./consistency";
import { decorationsFrom, renderHighlighted } from "./decorations";
import { diffWords } from "./diff";
import { EditorSession, type Suggestion } from "./session";
import type { RuleKind } from "./types";

const RULE_LABELS: Record<RuleKind, string> = {
  if_then: "IF/THEN structure",
  modal_verb: "MUST enforcement",
  expression: "comparison keywords",
};

const DRAFT_STORAGE_KEY = "reqdsl-editor-draft";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function startApp(baseUrl: string, client?: ServiceClient): EditorSession {
  const service = client ?? new HttpServiceClient(baseUrl);
  const draftArea = el<HTMLTextAreaElement>("draft");
  const highlight = el<HTMLDivElement>("highlight");
  const banner = el<HTMLDivElement>("connection-banner");
  const diagnosticsList = el<HTMLUListElement>("diagnostics");
  const constraintsList = el<HTMLUListElement>("constraints");
  const notesList = el<HTMLUListElement>("notes");
  const cards = el<HTMLDivElement>("suggestion-cards");
  const panel = el<HTMLUListElement>("consistency-panel");

  const session = new EditorSession(service, {
    onAnalysis(view) {
      const decorations = decorationsFrom(view.analysis, view.text.length);
      highlight.innerHTML = renderHighlighted(view.text, decorations);
      diagnosticsList.innerHTML = decorations
        .map(
          (d) =>
            `<li class="${d.className}-item">[${d.rule}] ${escapeHtml(d.message)}` +
            (d.fixHint ? ` <code>${escapeHtml(d.fixHint)}</code>` : "") +
            `</li>`,
        )
        .join("");
      constraintsList.innerHTML = view.analysis.constraints
        .map((c) => `<li><code>${escapeHtml(c.rendered)}</code></li>`)
        .join("");
      notesList.innerHTML = view.analysis.notes
        .map((n) => `<li>${escapeHtml(n)}</li>`)
        .join("");
      renderSuggestionButtons(view.analysis.classification);
    },
    onSuggestion(suggestion) {
      renderSuggestionCard(suggestion);
    },
    onConnectionChange(lost) {
      banner.hidden = !lost;
    },
  });

  function renderSuggestionButtons(classification: RuleKind[]): void {
    const bar = el<HTMLDivElement>("suggestion-buttons");
    bar.innerHTML = "";
    for (const rule of classification) {
      const button = document.createElement("button");
      button.textContent = `Suggest ${RULE_LABELS[rule]}`;
      button.addEventListener("click", () => {
        void session.requestSuggestion(rule);
      });
      bar.appendChild(button);
    }
  }

  function renderSuggestionCard(suggestion: Suggestion): void {
    const id = `card-${suggestion.rule}`;
    let card = document.getElementById(id);
    if (!card) {
      card = document.createElement("div");
      card.id = id;
      card.className = "suggestion-card";
      cards.appendChild(card);
    }
    if (suggestion.state === "pending") {
      card.innerHTML = `<p>Translating (${RULE_LABELS[suggestion.rule]})...</p>`;
      return;
    }
    if (suggestion.state === "error") {
      card.innerHTML =
        `<p class="card-error">${escapeHtml(suggestion.error ?? "backend error")}</p>` +
        `<button data-action="retry">Retry</button>`;
      card.querySelector("[data-action=retry]")?.addEventListener("click", () => {
        void session.requestSuggestion(suggestion.rule);
      });
      return;
    }
    if (suggestion.state === "empty") {
      card.innerHTML = "<p>Nothing to translate: the draft already conforms.</p>";
      return;
    }
    const output = suggestion.stages[suggestion.stages.length - 1].output;
    const diffHtml = diffWords(suggestion.sourceText, output)
      .map((seg) => `<span class="diff-${seg.kind}">${escapeHtml(seg.text)}</span>`)
      .join("");
    card.innerHTML =
      `<div class="diff-view">${diffHtml}</div>` +
      `<button data-action="accept">Accept</button>` +
      `<button data-action="edit">Edit</button>` +
      `<button data-action="reject">Reject</button>`;
    card.querySelector("[data-action=accept]")?.addEventListener("click", () => {
      void session.acceptSuggestion(suggestion.rule).then((applied) => {
        if (applied) {
          draftArea.value = session.draft;
          persistDraft();
          card?.remove();
        }
      });
    });
    card.querySelector("[data-action=edit]")?.addEventListener("click", () => {
      draftArea.value = output;
      session.setDraft(output);
      persistDraft();
      card?.remove();
    });
    card.querySelector("[data-action=reject]")?.addEventListener("click", () => {
      session.rejectSuggestion(suggestion.rule);
      card?.remove();
    });
  }

  async function refreshConsistency(): Promise<void> {
    try {
      const findings = await service.consistency();
      panel.innerHTML = panelEntries(findings)
        .map(
          (entry) =>
            `<li class="${entry.styleClass}">` +
            `<strong>${escapeHtml(entry.variable)}</strong> ` +
            `${escapeHtml(entry.explanation)}<br>` +
            entry.requirementIds
              .map((id) => `<a href="#" data-requirement="${escapeHtml(id)}">${escapeHtml(id)}</a>`)
              .join(" ") +
            `</li>`,
        )
        .join("");
      panel.querySelectorAll("a[data-requirement]").forEach((anchor) => {
        anchor.addEventListener("click", (event) => {
          event.preventDefault();
          const id = (anchor as HTMLAnchorElement).dataset["requirement"];
          if (id) void loadRequirement(id);
        });
      });
    } catch {
      panel.innerHTML = "<li class='finding-warning'>consistency check unavailable</li>";
    }
  }

  async function loadRequirement(id: string): Promise<void> {
    const records = await service.requirements();
    const match = records.find((r) => r.id === id);
    if (match) {
      draftArea.value = match.text;
      session.setDraft(match.text);
      persistDraft();
    }
  }

  function persistDraft(): void {
    try {
      sessionStorage.setItem(DRAFT_STORAGE_KEY, draftArea.value);
    } catch {
      // session storage may be unavailable; the draft simply isn't restored
    }
  }

  draftArea.addEventListener("input", () => {
    session.setDraft(draftArea.value);
    persistDraft();
  });
  draftArea.addEventListener("scroll", () => {
    highlight.scrollTop = draftArea.scrollTop;
    highlight.scrollLeft = draftArea.scrollLeft;
  });
  el<HTMLButtonElement>("refresh-consistency").addEventListener("click", () => {
    void refreshConsistency();
  });

  const stored = (() => {
    try {
      return sessionStorage.getItem(DRAFT_STORAGE_KEY);
    } catch {
      return null;
    }
  })();
  if (stored) {
    draftArea.value = stored;
  }
  session.setDraft(draftArea.value);
  void refreshConsistency();
  return session;
}
