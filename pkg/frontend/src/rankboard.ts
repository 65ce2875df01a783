import type { AttackVector } from "./types.js";

/**
 * Ordered list of attack vector cards. Position is rank: the top card is
 * rank 1. Cards move by drag-and-drop or by the per-card up/down buttons,
 * so the board always holds a complete permutation.
 */
export class RankBoard {
  readonly root: HTMLElement;
  private readonly avs: Map<string, AttackVector>;
  private ordering: string[];
  private dragId: string | null = null;
  private readonly onReorder?: (order: string[]) => void;

  constructor(
    container: HTMLElement,
    avs: AttackVector[],
    options: { onReorder?: (order: string[]) => void } = {},
  ) {
    this.avs = new Map(avs.map((av) => [av.id, av]));
    if (this.avs.size !== avs.length) {
      throw new Error("duplicate attack vector ids");
    }
    this.ordering = avs.map((av) => av.id);
    this.onReorder = options.onReorder;
    this.root = container.ownerDocument.createElement("ol");
    this.root.className = "rank-board";
    container.appendChild(this.root);
    this.render();
  }

  order(): string[] {
    return [...this.ordering];
  }

  /** av id -> rank (1 = most feasible, at the top). */
  ranks(): Record<string, number> {
    const out: Record<string, number> = {};
    this.ordering.forEach((id, index) => {
      out[id] = index + 1;
    });
    return out;
  }

  isComplete(): boolean {
    return this.ordering.length === this.avs.size;
  }

  moveUp(id: string): void {
    this.moveTo(id, this.ordering.indexOf(id) - 1);
  }

  moveDown(id: string): void {
    this.moveTo(id, this.ordering.indexOf(id) + 1);
  }

  moveTo(id: string, index: number): void {
    const from = this.ordering.indexOf(id);
    if (from < 0 || index < 0 || index >= this.ordering.length || index === from) return;
    this.ordering.splice(from, 1);
    this.ordering.splice(index, 0, id);
    this.render();
    this.onReorder?.(this.order());
  }

  private render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    this.ordering.forEach((id, index) => {
      const av = this.avs.get(id)!;
      const item = doc.createElement("li");
      item.className = "rank-card";
      item.dataset.avId = id;
      item.draggable = true;

      const rank = doc.createElement("span");
      rank.className = "rank-number";
      rank.textContent = String(index + 1);

      const label = doc.createElement("span");
      label.className = "rank-label";
      label.textContent = av.name;

      const up = doc.createElement("button");
      up.type = "button";
      up.className = "rank-up";
      up.textContent = "▲";
      up.disabled = index === 0;
      up.addEventListener("click", () => this.moveUp(id));

      const down = doc.createElement("button");
      down.type = "button";
      down.className = "rank-down";
      down.textContent = "▼";
      down.disabled = index === this.ordering.length - 1;
      down.addEventListener("click", () => this.moveDown(id));

      item.addEventListener("dragstart", (ev) => {
        this.dragId = id;
        ev.dataTransfer?.setData("text/plain", id);
      });
      item.addEventListener("dragover", (ev) => ev.preventDefault());
      item.addEventListener("drop", (ev) => {
        ev.preventDefault();
        if (this.dragId !== null && this.dragId !== id) {
          this.moveTo(this.dragId, this.ordering.indexOf(id));
        }
        this.dragId = null;
      });
      item.addEventListener("dragend", () => {
        this.dragId = null;
      });

      item.append(rank, label, up, down);
      this.root.appendChild(item);
    });
  }
}
