/**
 * Parser for the DOT subset the service emits.
 *
 * One or more `digraph "name" { ... }` blocks containing graph
 * attribute statements, quoted node statements with optional attribute
 * lists, and `"a" -> "b"` edge statements. Anything outside that shape
 * raises, which the caller turns into the raw-text fallback.
 */

export interface DotNode {
  id: string;
  attrs: Record<string, string>;
}

export interface DotEdge {
  from: string;
  to: string;
  attrs: Record<string, string>;
}

export interface DotGraph {
  name: string;
  attrs: Record<string, string>;
  nodes: DotNode[];
  edges: DotEdge[];
}

export class DotParseError extends Error {}

type Token = { kind: "punct" | "id" | "string"; value: string };

const PUNCT = new Set(["{", "}", "[", "]", "=", ";", ","]);

function tokenize(text: string): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (/\s/.test(ch)) {
      i += 1;
      continue;
    }
    if (ch === '"') {
      let j = i + 1;
      let value = "";
      while (j < text.length && text[j] !== '"') {
        if (text[j] === "\\" && j + 1 < text.length) {
          value += text[j + 1];
          j += 2;
        } else {
          value += text[j];
          j += 1;
        }
      }
      if (j >= text.length) {
        throw new DotParseError(`unterminated string at offset ${i}`);
      }
      tokens.push({ kind: "string", value });
      i = j + 1;
      continue;
    }
    if (text.startsWith("->", i)) {
      tokens.push({ kind: "punct", value: "->" });
      i += 2;
      continue;
    }
    if (PUNCT.has(ch)) {
      tokens.push({ kind: "punct", value: ch });
      i += 1;
      continue;
    }
    let j = i;
    while (j < text.length && /[\w.]/.test(text[j])) {
      j += 1;
    }
    if (j === i) {
      throw new DotParseError(`unexpected character ${ch} at offset ${i}`);
    }
    tokens.push({ kind: "id", value: text.slice(i, j) });
    i = j;
  }
  return tokens;
}

class TokenStream {
  private position = 0;

  constructor(private readonly tokens: Token[]) {}

  done(): boolean {
    return this.position >= this.tokens.length;
  }

  peek(): Token | undefined {
    return this.tokens[this.position];
  }

  next(): Token {
    const token = this.tokens[this.position];
    if (token === undefined) {
      throw new DotParseError("unexpected end of input");
    }
    this.position += 1;
    return token;
  }

  expectPunct(value: string): void {
    const token = this.next();
    if (token.kind !== "punct" || token.value !== value) {
      throw new DotParseError(`expected ${value}, found ${token.value}`);
    }
  }

  takeValue(): string {
    const token = this.next();
    if (token.kind === "punct") {
      throw new DotParseError(`expected identifier, found ${token.value}`);
    }
    return token.value;
  }

  peekIsPunct(value: string): boolean {
    const token = this.peek();
    return token !== undefined && token.kind === "punct" && token.value === value;
  }
}

function parseAttrList(stream: TokenStream): Record<string, string> {
  const attrs: Record<string, string> = {};
  stream.expectPunct("[");
  for (;;) {
    const key = stream.takeValue();
    stream.expectPunct("=");
    attrs[key] = stream.takeValue();
    if (stream.peekIsPunct(",")) {
      stream.next();
      continue;
    }
    break;
  }
  stream.expectPunct("]");
  return attrs;
}

function parseGraph(stream: TokenStream): DotGraph {
  const keyword = stream.next();
  if (keyword.kind !== "id" || keyword.value !== "digraph") {
    throw new DotParseError(`expected digraph, found ${keyword.value}`);
  }
  const graph: DotGraph = {
    name: stream.takeValue(),
    attrs: {},
    nodes: [],
    edges: [],
  };
  stream.expectPunct("{");
  while (!stream.peekIsPunct("}")) {
    const head = stream.takeValue();
    if (stream.peekIsPunct("=")) {
      stream.next();
      graph.attrs[head] = stream.takeValue();
    } else if (stream.peekIsPunct("->")) {
      stream.next();
      const to = stream.takeValue();
      const attrs = stream.peekIsPunct("[") ? parseAttrList(stream) : {};
      graph.edges.push({ from: head, to, attrs });
    } else {
      const attrs = stream.peekIsPunct("[") ? parseAttrList(stream) : {};
      graph.nodes.push({ id: head, attrs });
    }
    stream.expectPunct(";");
  }
  stream.expectPunct("}");
  return graph;
}

export function parseDot(text: string): DotGraph[] {
  const stream = new TokenStream(tokenize(text));
  const graphs: DotGraph[] = [];
  while (!stream.done()) {
    graphs.push(parseGraph(stream));
  }
  if (graphs.length === 0) {
    throw new DotParseError("no digraph found");
  }
  return graphs;
}
