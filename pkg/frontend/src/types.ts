// Wire types of the qa service HTTP API.

export interface AskAnswer {
  precise_answer: string | null;
  sentence: string;
  doc_id: string;
  score: number;
  ontology_derived: boolean;
}

export interface AskResponse {
  question: string;
  focus: string;
  frame_predicates: string[];
  answers: AskAnswer[];
}

export interface OntologyStats {
  classes: number;
  properties: number;
  triples: number;
}
