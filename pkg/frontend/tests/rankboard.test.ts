import { describe, expect, it } from "vitest";

import { RankBoard } from "../src/rankboard.js";
import type { AttackVector } from "../src/types.js";

const AVS: AttackVector[] = [
  { id: "av1", name: "Phishing chain", hop_path: ["h1"] },
  { id: "av2", name: "Supply side", hop_path: ["h2"] },
  { id: "av3", name: "Insider", hop_path: ["h3"] },
];

const setup = (avs: AttackVector[] = AVS) => {
  const container = document.createElement("div");
  document.body.appendChild(container);
  const orders: string[][] = [];
  const board = new RankBoard(container, avs, { onReorder: (o) => orders.push(o) });
  return { board, orders };
};

describe("RankBoard", () => {
  it("starts in scenario order with ranks 1..n", () => {
    const { board } = setup();
    expect(board.order()).toEqual(["av1", "av2", "av3"]);
    expect(board.ranks()).toEqual({ av1: 1, av2: 2, av3: 3 });
    expect(board.isComplete()).toBe(true);
  });

  it("rejects duplicate ids", () => {
    const container = document.createElement("div");
    expect(() => new RankBoard(container, [AVS[0], AVS[0]])).toThrow(/duplicate/);
  });

  it("moves cards with the buttons and reports each reorder", () => {
    const { board, orders } = setup();
    board.moveDown("av1");
    expect(board.order()).toEqual(["av2", "av1", "av3"]);
    board.moveUp("av3");
    expect(board.order()).toEqual(["av2", "av3", "av1"]);
    expect(board.ranks()).toEqual({ av2: 1, av3: 2, av1: 3 });
    expect(orders).toEqual([
      ["av2", "av1", "av3"],
      ["av2", "av3", "av1"],
    ]);
  });

  it("ignores moves past either end", () => {
    const { board, orders } = setup();
    board.moveUp("av1");
    board.moveDown("av3");
    expect(board.order()).toEqual(["av1", "av2", "av3"]);
    expect(orders).toEqual([]);
  });

  it("moves a card to an arbitrary slot", () => {
    const { board } = setup();
    board.moveTo("av3", 0);
    expect(board.order()).toEqual(["av3", "av1", "av2"]);
  });

  it("renders a card per AV, numbered by position", () => {
    const { board } = setup();
    board.moveTo("av2", 0);
    const cards = [...board.root.querySelectorAll<HTMLElement>(".rank-card")];
    expect(cards.map((c) => c.dataset.avId)).toEqual(["av2", "av1", "av3"]);
    expect(cards.map((c) => c.querySelector(".rank-number")!.textContent)).toEqual([
      "1",
      "2",
      "3",
    ]);
    expect(cards[0].querySelector(".rank-label")!.textContent).toBe("Supply side");
  });

  it("disables the arrows at the edges", () => {
    const { board } = setup();
    const cards = [...board.root.querySelectorAll<HTMLElement>(".rank-card")];
    expect(cards[0].querySelector<HTMLButtonElement>(".rank-up")!.disabled).toBe(true);
    expect(cards[0].querySelector<HTMLButtonElement>(".rank-down")!.disabled).toBe(false);
    expect(cards[2].querySelector<HTMLButtonElement>(".rank-down")!.disabled).toBe(true);
  });

  it("reorders via button clicks on the rendered DOM", () => {
    const { board } = setup();
    const down = board.root.querySelector<HTMLButtonElement>(
      '.rank-card[data-av-id="av1"] .rank-down',
    )!;
    down.click();
    expect(board.order()).toEqual(["av2", "av1", "av3"]);
  });
});
