// DOM rendering. One `render()` redraws the app from flow state; event
// handlers mutate the flows and re-render. All answer and letter inputs
// are type="password" so entries appear as dots, and nothing typed is
// kept outside the live input elements and the in-flight request.

import { AuthApi } from "./api.js";
import { QUESTIONS } from "./bank.js";
import { LoginFlow } from "./login.js";
import { RegistrationFlow } from "./registration.js";

export interface AppConfig {
  baseUrl: string;
  enrollCount: number;
  studyMode?: boolean;
}

interface AppState {
  api: AuthApi;
  config: AppConfig;
  view: "register" | "login";
  accountId: string;
  registration: RegistrationFlow;
  login: LoginFlow | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) node.textContent = text;
  return node;
}

function maskedInput(attrs: Record<string, string> = {}): HTMLInputElement {
  return el("input", { type: "password", autocomplete: "off", ...attrs });
}

export function mountApp(root: HTMLElement, config: AppConfig): { render: () => void; state: AppState } {
  const state: AppState = {
    api: new AuthApi(config.baseUrl),
    config,
    view: "register",
    accountId: "",
    registration: new RegistrationFlow(QUESTIONS, config.enrollCount),
    login: null,
  };

  function render(): void {
    root.replaceChildren();
    root.appendChild(renderHeader());
    root.appendChild(state.view === "register" ? renderRegistration() : renderLogin());
  }

  function renderHeader(): HTMLElement {
    const header = el("header");
    const nav = el("nav");
    for (const view of ["register", "login"] as const) {
      const button = el(
        "button",
        { "data-nav": view, ...(state.view === view ? { "data-active": "true" } : {}) },
        view === "register" ? "Register" : "Log in",
      );
      button.addEventListener("click", () => {
        state.view = view;
        if (view === "login") state.login = null; // never reuse an old challenge after navigation
        render();
      });
      nav.appendChild(button);
    }
    header.appendChild(nav);

    const account = el("label", {}, "Account id: ");
    const input = el("input", { type: "text", id: "account-id", value: state.accountId });
    input.addEventListener("input", () => {
      state.accountId = input.value;
    });
    account.appendChild(input);
    header.appendChild(account);
    return header;
  }

  // -- registration ---------------------------------------------------------

  function renderRegistration(): HTMLElement {
    const flow = state.registration;
    const section = el("section", { id: "registration" });

    if (flow.phase === "done") {
      section.appendChild(el("p", { class: "success", id: "registration-success" }, "Registration complete. You can log in now."));
      return section;
    }

    if (flow.phase === "picking") {
      section.appendChild(
        el("p", {}, `Pick exactly ${flow.enrollCount} questions (${flow.selected.length} selected).`),
      );
      const list = el("ul", { id: "question-picker" });
      for (const question of flow.questions) {
        const item = el("li");
        const label = el("label");
        const box = el("input", {
          type: "checkbox",
          "data-question": question.id,
          ...(flow.isSelected(question.id) ? { checked: "checked" } : {}),
        });
        box.checked = flow.isSelected(question.id);
        box.addEventListener("change", () => {
          flow.toggle(question.id);
          render();
        });
        label.appendChild(box);
        label.appendChild(document.createTextNode(" " + question.text));
        item.appendChild(label);
        list.appendChild(item);
      }
      section.appendChild(list);
      const next = el("button", { id: "to-answers" }, "Answer the questions");
      next.disabled = !flow.selectionComplete;
      next.addEventListener("click", () => {
        flow.beginAnswering();
        render();
      });
      section.appendChild(next);
      return section;
    }

    // answering / submitting
    section.appendChild(el("p", {}, "Answers are case-insensitive; only letters count."));
    for (const violation of flow.generalViolations) {
      section.appendChild(el("p", { class: "violation", "data-rule": violation.rule }, `${violation.rule}: ${violation.detail}`));
    }
    if (flow.submitError) {
      section.appendChild(el("p", { class: "violation" }, flow.submitError));
    }
    const form = el("div", { id: "answer-form" });
    for (const qid of flow.selected) {
      const question = flow.questions.find((q) => q.id === qid)!;
      const block = el("div", { class: "answer-block", "data-question": qid });
      block.appendChild(el("p", {}, question.text + (question.answerHint ? ` (${question.answerHint})` : "")));
      const entry = flow.getEntry(qid);
      const answer = maskedInput({ "data-answer": qid, placeholder: "answer" });
      answer.value = entry.answer;
      const confirmation = maskedInput({ "data-confirm": qid, placeholder: "repeat answer" });
      confirmation.value = entry.confirmation;
      const update = () => {
        flow.setEntry(qid, answer.value, confirmation.value);
        submit.disabled = !flow.canSubmit;
      };
      answer.addEventListener("input", update);
      confirmation.addEventListener("input", update);
      block.appendChild(answer);
      block.appendChild(confirmation);
      for (const violation of flow.violationsFor(qid)) {
        block.appendChild(el("span", { class: "violation", "data-rule": violation.rule }, violation.rule));
      }
      form.appendChild(block);
    }
    section.appendChild(form);

    const back = el("button", { id: "back-to-picker" }, "Change questions");
    back.addEventListener("click", () => {
      flow.backToPicking();
      render();
    });
    section.appendChild(back);

    const submit = el("button", { id: "submit-registration" }, "Register");
    submit.disabled = !flow.canSubmit || flow.phase === "submitting";
    submit.addEventListener("click", () => {
      void flow.submit(state.api, state.accountId).then(render);
    });
    section.appendChild(submit);
    return section;
  }

  // -- login ----------------------------------------------------------------

  function renderLogin(): HTMLElement {
    const section = el("section", { id: "login" });
    const flow = state.login;

    if (!flow || flow.phase === "idle") {
      const start = el("button", { id: "start-login" }, "Start login");
      start.addEventListener("click", () => {
        state.login = new LoginFlow(state.api, state.accountId, state.config.studyMode ?? false);
        void state.login.start().then(render);
      });
      section.appendChild(start);
      return section;
    }

    switch (flow.phase) {
      case "answering": {
        const probe = flow.currentProbe;
        section.appendChild(
          el("p", { id: "login-progress" }, `Question ${Math.min(flow.index + 1, flow.probeCount)} of ${flow.probeCount}`),
        );
        if (probe) {
          section.appendChild(el("p", { id: "probe-prompt" }, flow.promptFor(flow.index)));
          const letter = maskedInput({ id: "letter-input", maxlength: "1" });
          letter.addEventListener("input", () => {
            if (letter.value.length === 1 && flow.enterLetter(letter.value)) {
              render(); // auto-advance to the next probe
            } else {
              letter.value = "";
            }
          });
          section.appendChild(letter);
          letter.focus();
        } else {
          section.appendChild(el("p", { id: "probe-prompt" }, "All letters entered."));
          if (flow.allowProbeRetry) {
            for (let i = 0; i < flow.probeCount; i++) {
              const redo = el("button", { class: "retry-probe", "data-probe": String(i) }, `Re-enter #${i + 1}`);
              redo.addEventListener("click", () => {
                flow.retryProbe(i);
                render();
              });
              section.appendChild(redo);
            }
          }
          const submit = el("button", { id: "submit-login" }, "Submit");
          submit.disabled = !flow.complete;
          submit.addEventListener("click", () => {
            void flow.submit().then(render);
          });
          section.appendChild(submit);
        }
        return section;
      }
      case "submitting":
        section.appendChild(el("p", {}, "Checking..."));
        return section;
      case "verdict": {
        const verdict = flow.verdict!;
        section.appendChild(
          el(
            "p",
            { id: "login-verdict", "data-outcome": verdict.outcome },
            verdict.outcome === "success" ? "Login successful." : `Login failed. Attempts remaining: ${verdict.attempts_remaining}.`,
          ),
        );
        if (verdict.per_probe) {
          const marks = verdict.per_probe.map((ok, i) => `#${i + 1} ${ok ? "ok" : "miss"}`).join(", ");
          section.appendChild(el("p", { id: "per-probe" }, marks));
        }
        section.appendChild(restartButton(flow, "Log in again"));
        return section;
      }
      case "expired":
        section.appendChild(
          el("p", { id: "challenge-expired" }, "That challenge expired or was already used. Restart to get a fresh one."),
        );
        section.appendChild(restartButton(flow, "Restart login"));
        return section;
      case "locked": {
        const until = flow.deniedUntil ? new Date(flow.deniedUntil * 1000).toLocaleTimeString() : "later";
        section.appendChild(el("p", { id: "lockout-notice" }, `Account locked. Try again at ${until}.`));
        return section;
      }
      case "error":
        section.appendChild(el("p", { class: "violation", id: "login-error" }, flow.errorMessage));
        section.appendChild(restartButton(flow, "Try again"));
        return section;
      default:
        return section;
    }
  }

  function restartButton(flow: LoginFlow, label: string): HTMLElement {
    const button = el("button", { id: "restart-login" }, label);
    button.addEventListener("click", () => {
      void flow.restart().then(render);
    });
    return button;
  }

  render();
  return { render, state };
}
