// Shared test scaffolding: a recording draw surface, a DOM fixture for the
// workbench, and deterministic pointer-drawing with fake timers.

import { vi } from "vitest";
import { WorkbenchElements } from "../src/app";
import { DrawContext } from "../src/overlay";

export interface RecordedOp {
    op: string;
    args: unknown[];
}

export class RecordingContext implements DrawContext {
    strokeStyle: string | CanvasGradient | CanvasPattern = "#000";
    fillStyle: string | CanvasGradient | CanvasPattern = "#000";
    lineWidth = 1;
    font = "";
    ops: RecordedOp[] = [];

    private log(op: string, ...args: unknown[]): void {
        this.ops.push({ op, args });
    }

    clearRect(...args: unknown[]): void { this.log("clearRect", ...args); }
    strokeRect(...args: unknown[]): void { this.log("strokeRect", ...args); }
    beginPath(): void { this.log("beginPath"); }
    moveTo(...args: unknown[]): void { this.log("moveTo", ...args); }
    lineTo(...args: unknown[]): void { this.log("lineTo", ...args); }
    arc(...args: unknown[]): void { this.log("arc", ...args); }
    stroke(): void { this.log("stroke"); }
    fill(): void { this.log("fill"); }
    fillText(...args: unknown[]): void { this.log("fillText", ...args); }
    setLineDash(...args: unknown[]): void { this.log("setLineDash", ...args); }

    count(op: string): number {
        return this.ops.filter((entry) => entry.op === op).length;
    }

    reset(): void {
        this.ops = [];
    }
}

export function buildDom(): WorkbenchElements {
    document.body.innerHTML = `
        <canvas id="board" width="860" height="520"></canvas>
        <button id="submit-demo"></button>
        <button id="split-marker"></button>
        <button id="apply-correction"></button>
        <button id="reset"></button>
        <input id="lambda-slider" type="range" min="-2" max="3" step="0.1" value="0" />
        <span id="lambda-value"></span>
        <div id="status"></div>
    `;
    const get = <T extends HTMLElement>(id: string) => document.getElementById(id) as T;
    return {
        canvas: get<HTMLCanvasElement>("board"),
        submitDemo: get<HTMLButtonElement>("submit-demo"),
        splitMarker: get<HTMLButtonElement>("split-marker"),
        applyCorrection: get<HTMLButtonElement>("apply-correction"),
        reset: get<HTMLButtonElement>("reset"),
        lambdaSlider: get<HTMLInputElement>("lambda-slider"),
        lambdaValue: get<HTMLElement>("lambda-value"),
        status: get<HTMLElement>("status"),
    };
}

export function pointerEvent(type: string, x: number, y: number): MouseEvent {
    return new MouseEvent(type, { clientX: x, clientY: y, bubbles: true });
}

/** Draw one stroke through the given points; one sample is captured at the
 * first point and one per subsequent point (fake timers must be active). */
export function stroke(
    target: HTMLElement,
    points: ReadonlyArray<readonly [number, number]>,
    periodMs = 20,
): void {
    target.dispatchEvent(pointerEvent("pointerdown", points[0][0], points[0][1]));
    for (const [x, y] of points.slice(1)) {
        target.dispatchEvent(pointerEvent("pointermove", x, y));
        vi.advanceTimersByTime(periodMs);
    }
    const last = points[points.length - 1];
    target.dispatchEvent(pointerEvent("pointerup", last[0], last[1]));
}

/** A gently curved path between two x positions, usable as a drawn motion. */
export function arcPath(
    x0: number, x1: number, yBase: number, bow: number, count: number,
): Array<[number, number]> {
    const out: Array<[number, number]> = [];
    for (let index = 0; index < count; index += 1) {
        const u = index / (count - 1);
        out.push([x0 + (x1 - x0) * u, yBase - bow * Math.sin(Math.PI * u)]);
    }
    return out;
}
