// Interval selection on a horizontal 0..100 track. A single press-drag-release
// gesture draws the interval: the press point is one endpoint, the release
// point the other (either order), and a plain click yields a degenerate
// interval lo == hi. Values snap to 0.5 steps. A gesture that starts outside
// the track is ignored entirely; once started, moves are clamped to the track.

export const SCALE_MIN = 0;
export const SCALE_MAX = 100;
export const STEP = 0.5;

export interface TrackRect {
  left: number;
  width: number;
}

/** Round to the nearest step and clamp into the scale. */
export function snapToStep(value: number): number {
  const snapped = Math.round(value / STEP) * STEP;
  return Math.min(SCALE_MAX, Math.max(SCALE_MIN, snapped));
}

/** Map a pointer x to a scale value, or null when the pointer is off the track. */
export function toScale(clientX: number, rect: TrackRect): number | null {
  if (rect.width <= 0) return null;
  if (clientX < rect.left || clientX > rect.left + rect.width) return null;
  return ((clientX - rect.left) / rect.width) * (SCALE_MAX - SCALE_MIN) + SCALE_MIN;
}

/** Like toScale, but clamps positions beyond the track to its ends. */
export function toScaleClamped(clientX: number, rect: TrackRect): number {
  if (rect.width <= 0) return SCALE_MIN;
  const frac = Math.min(1, Math.max(0, (clientX - rect.left) / rect.width));
  return frac * (SCALE_MAX - SCALE_MIN) + SCALE_MIN;
}

export type Interval = [number, number];

/**
 * The press/drag/release state machine, independent of the DOM so it can be
 * driven directly in tests. begin() refuses positions off the track; move()
 * and finish() clamp, so a drag may leave the track and come back without
 * ever producing an out-of-range endpoint.
 */
export class IntervalGesture {
  private anchor: number | null = null;
  private cursor: number | null = null;

  get active(): boolean {
    return this.anchor !== null;
  }

  /** Returns true when the gesture actually started. */
  begin(clientX: number, rect: TrackRect): boolean {
    const value = toScale(clientX, rect);
    if (value === null) return false;
    this.anchor = snapToStep(value);
    this.cursor = this.anchor;
    return true;
  }

  move(clientX: number, rect: TrackRect): void {
    if (this.anchor === null) return;
    this.cursor = snapToStep(toScaleClamped(clientX, rect));
  }

  /** The interval being drawn, or null when no gesture is active. */
  preview(): Interval | null {
    if (this.anchor === null || this.cursor === null) return null;
    return [Math.min(this.anchor, this.cursor), Math.max(this.anchor, this.cursor)];
  }

  /** End the gesture and return the drawn interval (null if none was active). */
  finish(clientX: number, rect: TrackRect): Interval | null {
    if (this.anchor === null) return null;
    this.move(clientX, rect);
    const result = this.preview();
    this.cancel();
    return result;
  }

  cancel(): void {
    this.anchor = null;
    this.cursor = null;
  }
}

export interface IntervalWidgetOptions {
  onChange?: (interval: Interval) => void;
  /** Test seam: jsdom reports zero-size rects, so tests inject geometry. */
  rectFor?: (el: Element) => TrackRect;
}

/**
 * DOM widget wrapping IntervalGesture: a track with a highlighted band and an
 * ellipse drawn over the selection. The ellipse is decoration; the band's
 * extent is the answer.
 */
export class IntervalWidget {
  readonly root: HTMLElement;
  readonly track: HTMLElement;
  private readonly band: HTMLElement;
  private readonly ellipse: SVGEllipseElement;
  private readonly readout: HTMLElement;
  private readonly gesture = new IntervalGesture();
  private readonly rectFor: (el: Element) => TrackRect;
  private readonly onChange?: (interval: Interval) => void;
  private committed: Interval | null = null;
  private _dirty = false;

  constructor(container: HTMLElement, options: IntervalWidgetOptions = {}) {
    this.onChange = options.onChange;
    this.rectFor = options.rectFor ?? ((el) => el.getBoundingClientRect());

    const doc = container.ownerDocument;
    this.root = doc.createElement("div");
    this.root.className = "interval-widget";

    this.track = doc.createElement("div");
    this.track.className = "iw-track";

    this.band = doc.createElement("div");
    this.band.className = "iw-band";
    this.band.style.display = "none";
    this.track.appendChild(this.band);

    const svg = doc.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("class", "iw-ellipse");
    svg.setAttribute("viewBox", "0 0 100 24");
    svg.setAttribute("preserveAspectRatio", "none");
    this.ellipse = doc.createElementNS("http://www.w3.org/2000/svg", "ellipse");
    this.ellipse.setAttribute("cy", "12");
    this.ellipse.setAttribute("ry", "10");
    this.ellipse.setAttribute("visibility", "hidden");
    svg.appendChild(this.ellipse);
    this.track.appendChild(svg);

    this.readout = doc.createElement("div");
    this.readout.className = "iw-readout";
    this.readout.textContent = "drag across the bar to answer";

    this.root.appendChild(this.track);
    this.root.appendChild(this.readout);
    container.appendChild(this.root);

    this.track.addEventListener("pointerdown", this.onPointerDown);
    this.track.addEventListener("pointermove", this.onPointerMove);
    this.track.addEventListener("pointerup", this.onPointerUp);
    this.track.addEventListener("pointercancel", this.onPointerCancel);
  }

  private onPointerDown = (ev: PointerEvent): void => {
    if (!this.gesture.begin(ev.clientX, this.rectFor(this.track))) return;
    // capture so drags that leave the track still deliver move/up here
    if (typeof this.track.setPointerCapture === "function") {
      try {
        this.track.setPointerCapture(ev.pointerId);
      } catch {
        // capture is best-effort; jsdom and odd pointer ids may refuse
      }
    }
    this.render(this.gesture.preview());
  };

  private onPointerMove = (ev: PointerEvent): void => {
    if (!this.gesture.active) return;
    this.gesture.move(ev.clientX, this.rectFor(this.track));
    this.render(this.gesture.preview());
  };

  private onPointerUp = (ev: PointerEvent): void => {
    const interval = this.gesture.finish(ev.clientX, this.rectFor(this.track));
    if (interval === null) return;
    this.committed = interval;
    this._dirty = true;
    this.render(interval);
    this.onChange?.(interval);
  };

  private onPointerCancel = (): void => {
    this.gesture.cancel();
    this.render(this.committed);
  };

  private render(interval: Interval | null): void {
    if (interval === null) {
      this.band.style.display = "none";
      this.ellipse.setAttribute("visibility", "hidden");
      this.readout.textContent = "drag across the bar to answer";
      return;
    }
    const [lo, hi] = interval;
    this.band.style.display = "block";
    this.band.style.left = `${lo}%`;
    this.band.style.width = `${hi - lo}%`;
    this.ellipse.setAttribute("cx", String((lo + hi) / 2));
    this.ellipse.setAttribute("rx", String(Math.max((hi - lo) / 2, 0.75)));
    this.ellipse.setAttribute("visibility", "visible");
    this.readout.textContent = lo === hi ? `${lo}` : `${lo} to ${hi}`;
  }

  /** The last committed interval, or null before any gesture completed. */
  value(): Interval | null {
    return this.committed;
  }

  get dirty(): boolean {
    return this._dirty;
  }

  reset(): void {
    this.gesture.cancel();
    this.committed = null;
    this._dirty = false;
    this.render(null);
  }
}
