/** Browser bootstrap: binds the controller to the static page. */

import { ServiceClient } from "./api.js";
import { AppController } from "./app.js";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) {
    throw new Error(`missing element #${id}`);
  }
  return element as T;
}

export function bootstrap(baseUrl: string): AppController {
  const controller = new AppController(new ServiceClient(baseUrl));

  const codeInput = byId<HTMLTextAreaElement>("code-input");
  const uploadButton = byId<HTMLButtonElement>("upload-button");
  const chatInput = byId<HTMLInputElement>("chat-input");
  const sendButton = byId<HTMLButtonElement>("send-button");
  const contextToggle = byId<HTMLInputElement>("context-toggle");
  const graphPanel = byId<HTMLDivElement>("graph-panel");
  const transcriptPanel = byId<HTMLUListElement>("transcript");
  const diffPanel = byId<HTMLUListElement>("diff-messages");

  function redraw(): void {
    uploadButton.disabled = !controller.canUpload();
    sendButton.disabled = !controller.canSend() || chatInput.value.trim() === "";

    const rendered = controller.renderCurrentGraph();
    if (rendered.ok) {
      graphPanel.innerHTML = rendered.svg;
    } else {
      graphPanel.textContent = "";
      const pre = document.createElement("pre");
      pre.className = "dot-fallback";
      pre.textContent = rendered.fallback;
      graphPanel.appendChild(pre);
    }

    transcriptPanel.textContent = "";
    for (const entry of controller.state.chatTranscript) {
      const item = document.createElement("li");
      item.className = `bubble ${entry.role}`;
      item.textContent = entry.text;
      transcriptPanel.appendChild(item);
    }

    diffPanel.textContent = "";
    for (const message of controller.state.lastDiffMessages) {
      const item = document.createElement("li");
      item.textContent = message;
      diffPanel.appendChild(item);
    }
  }

  codeInput.addEventListener("input", () => {
    controller.setCode(codeInput.value);
    redraw();
  });
  uploadButton.addEventListener("click", () => {
    void controller.uploadCode().then(redraw);
    redraw();
  });
  sendButton.addEventListener("click", () => {
    const text = chatInput.value;
    chatInput.value = "";
    void controller.sendRequest(text).then(redraw);
    redraw();
  });
  chatInput.addEventListener("input", redraw);
  contextToggle.addEventListener("change", () => {
    controller.toggleContext();
  });

  redraw();
  return controller;
}

declare global {
  interface Window {
    chatfsmBootstrap: typeof bootstrap;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.chatfsmBootstrap = bootstrap;
  const auto = document.getElementById("app");
  if (auto !== null) {
    bootstrap(auto.dataset.serviceUrl ?? "http://127.0.0.1:8000");
  }
}
