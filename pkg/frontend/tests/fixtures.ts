import type { AskResponse } from "../src/types.js";

export const GOLDEN_RESPONSE: AskResponse = {
  question: "Who gave a balloon to the kid?",
  focus: "PERSON",
  frame_predicates: [
    "has_possession(start(E), Agent, Theme)",
    "has_possession(end(E), Recipient, Theme)",
    "transfer(during(E), Theme)",
  ],
  answers: [
    {
      precise_answer: "John",
      sentence: "John gave a balloon to the kid.",
      doc_id: "balloon",
      score: 1.0,
      ontology_derived: false,
    },
    {
      precise_answer: "sailor",
      sentence: "A sailor gave a silver coin to Clara.",
      doc_id: "bakery",
      score: 0.8,
      ontology_derived: false,
    },
  ],
};

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
