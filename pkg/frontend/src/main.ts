/** Page wiring: create or resume a session, drive the rating loop.
 *
 * The session id lives in the URL hash, so reloading mid-session rebuilds
 * the view from server state alone (pins are client-only and reset).
 */

import { LoopClient } from "./api";
import { parseObj } from "./obj";
import { Pin, ViewState } from "./state";
import { ApiError, TERMINAL_STATES } from "./types";
import { CompareView, GalleryView, TimelineView, WireframeMode } from "./ui";

const client = new LoopClient("");

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function setStatus(text: string): void {
  byId("status").textContent = text;
}

function labMode(): WireframeMode {
  const params = new URLSearchParams(window.location.search);
  const flag = params.get("wireframe");
  return flag === "on" || flag === "off" ? flag : "toggle";
}

async function showTerminal(sessionId: string, state: string): Promise<void> {
  const stage = byId("stage");
  stage.replaceChildren();
  const summary = document.createElement("div");
  summary.className = "terminal-summary";
  const title = document.createElement("h2");
  title.textContent = `session ended: ${state}`;
  summary.append(title);
  const session = await client.getSession(sessionId);
  for (let index = 1; index <= session.iteration_count; index++) {
    const payload = await client.fetchIteration(sessionId, index);
    if (!payload) continue;
    const row = document.createElement("div");
    row.className = "terminal-row";
    const ratings = payload.variants.map((v) => v.rating ?? "-").join(", ");
    row.textContent = `iteration ${index}: ratings [${ratings}]`;
    summary.append(row);
  }
  stage.append(summary);
  setStatus("terminated");
}

async function runSession(sessionId: string): Promise<void> {
  window.location.hash = sessionId;
  const stage = byId("stage");
  stage.replaceChildren();

  const galleryRoot = document.createElement("div");
  galleryRoot.id = "gallery";
  const timelineRoot = document.createElement("div");
  timelineRoot.id = "timeline";
  const compareRoot = document.createElement("div");
  compareRoot.id = "compare";
  compareRoot.hidden = true;
  stage.append(galleryRoot, timelineRoot, compareRoot);

  const state = new ViewState(sessionId);
  const compare = new CompareView(compareRoot);

  const openCompare = (pin: Pin) => {
    const current = state.selectedVariant;
    const gallery = view;
    compareRoot.hidden = false;
    compare.setPair(
      {
        label: `pinned: iteration ${pin.iterationIndex} variant ${pin.variantIndex + 1}`,
        parsed: parseObj(pin.variant.mesh),
      },
      {
        label: `current: iteration ${state.iterationIndex} variant ${current + 1}`,
        parsed: gallery.parsedVariant(current),
      },
    );
  };

  const advance = async (index: number) => {
    setStatus(`computing iteration ${index}...`);
    const payload = await client.waitForIteration(sessionId, index);
    state.loadIteration(payload);
    setStatus(`iteration ${index}: rate all four variants`);
  };

  const view = new GalleryView(galleryRoot, state, {
    wireframeMode: labMode(),
    onSubmit: async (ratings) => {
      setStatus("submitting...");
      try {
        const response = await client.submitRatings(
          sessionId,
          state.iterationIndex,
          ratings,
        );
        if (TERMINAL_STATES.has(response.state)) {
          await showTerminal(sessionId, response.state);
        } else {
          await advance(state.iterationIndex + 1);
        }
      } catch (error) {
        if (error instanceof ApiError) setStatus(`rejected: ${error.detail}`);
        else throw error;
      }
    },
    onTerminate: async (reason) => {
      const response = await client.terminate(sessionId, reason);
      await showTerminal(sessionId, response.state);
    },
    onPin: openCompare,
  });
  new TimelineView(timelineRoot, state, openCompare);

  const session = await client.getSession(sessionId);
  if (TERMINAL_STATES.has(session.state)) {
    await showTerminal(sessionId, session.state);
  } else if (session.state === "awaiting_ratings") {
    await advance(session.iteration_count);
  } else {
    await advance(session.iteration_count + 1);
  }
}

function bindCreateForm(): void {
  const form = byId("create-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const fileInput = byId("mesh-file") as HTMLInputElement;
    const seedInput = byId("seed") as HTMLInputElement;
    const file = fileInput.files?.[0];
    if (!file) {
      setStatus("choose an OBJ file first");
      return;
    }
    try {
      setStatus("uploading...");
      const session = await client.createSession(file, file.name, {
        seed: seedInput.value ? Number(seedInput.value) : undefined,
      });
      await runSession(session.session_id);
    } catch (error) {
      if (error instanceof ApiError) setStatus(`create failed: ${error.detail}`);
      else throw error;
    }
  });
}

export function start(): void {
  bindCreateForm();
  const resume = window.location.hash.replace(/^#/, "");
  if (resume) {
    runSession(resume).catch((error) => {
      setStatus(error instanceof ApiError ? error.detail : String(error));
    });
  }
}

if (!import.meta.env?.VITEST) {
  start();
}
