export type TokenKind = "word" | "number" | "symbol" | "entity";

export interface AnalyzedToken {
  text: string;
  start: number;
  end: number;
  kind: TokenKind;
  prob?: number;
  highlighted?: boolean;
}

export interface AnalyzeResponse {
  tokens: AnalyzedToken[];
  model_version: number;
}

export interface SessionInfo {
  session_id: string;
  model_version: number;
  threshold: number;
  easy_words: string[];
  hard_words: string[];
}

export interface AlternativesResponse {
  word: string;
  alternatives: string[];
  none_known: boolean;
}

export interface FeedbackResponse {
  model_version: number;
}

export interface QueryResponse {
  word: string;
  model_version: number;
}
