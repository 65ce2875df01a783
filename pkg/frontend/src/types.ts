// Payload shapes for the elicitation service API.

export interface Hop {
  id: string;
  name: string;
  description: string;
}

export interface AttackVector {
  id: string;
  name: string;
  hop_path: string[];
}

export interface Question {
  id: string;
  text: string;
  is_overall: boolean;
}

export interface Scenario {
  id: string;
  avs: AttackVector[];
  hops: Hop[];
  questions: Question[];
}

export interface ExpertRef {
  id: string;
  group_id: string;
}

export interface ScenarioEnvelope {
  scenario: Scenario;
  experts: ExpertRef[];
}

export type SessionState = "ranking" | "rating" | "submitted";

export interface PendingPair {
  hop_id: string;
  question_id: string;
}

export interface SessionView {
  session_id: string;
  expert_id: string;
  state: SessionState;
  created_at: string;
  answered: number;
  required: number;
  remaining?: PendingPair[];
}

export interface Problem {
  code: string;
  message: string;
}
