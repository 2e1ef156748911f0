import { describe, expect, it } from "vitest";
import { Curve, fitViewport, renderOverlay } from "../src/overlay";
import { RecordingContext } from "./helpers";

const WIDTH = 800;
const HEIGHT = 500;

function curve(label: string, points: number[][], color = "#123456"): Curve {
    return { label, points, color };
}

describe("renderOverlay", () => {
    it("renders empty axes for an empty set", () => {
        const ctx = new RecordingContext();
        const summary = renderOverlay(ctx, WIDTH, HEIGHT, []);
        expect(summary).toEqual({ curves: 0, arrows: 0, markers: 0 });
        expect(ctx.count("clearRect")).toBe(1);
        expect(ctx.count("strokeRect")).toBe(1); // the frame
        expect(ctx.count("lineTo")).toBe(0);
    });

    it("renders a single curve with a direction arrow", () => {
        const ctx = new RecordingContext();
        const points = [[0, 0], [1, 1], [2, 0], [3, 2]];
        const summary = renderOverlay(ctx, WIDTH, HEIGHT, [curve("one", points)]);
        expect(summary).toEqual({ curves: 1, arrows: 1, markers: 0 });
        // polyline: one moveTo plus a lineTo per remaining point; the arrow
        // head adds one moveTo and two lineTo
        expect(ctx.count("moveTo")).toBe(2);
        expect(ctx.count("lineTo")).toBe(points.length - 1 + 2);
        expect(ctx.count("fillText")).toBe(1); // legend entry
    });

    it("skips curves with fewer than two points", () => {
        const ctx = new RecordingContext();
        const summary = renderOverlay(ctx, WIDTH, HEIGHT, [curve("dot", [[1, 1]])]);
        expect(summary.curves).toBe(0);
    });

    it("post-correction fixture shows four curves and two markers", () => {
        const ctx = new RecordingContext();
        const fixture: Curve[] = [
            curve("deficient rollout", [[0, 0], [4, 1], [8, 0]], "#e08080"),
            curve("corrective (drawn)", [[8, 0], [5, 0.5], [9, -1]], "#d01818"),
            curve("merged", [[0, 0], [5, 0.5], [9, -1]], "#188018"),
            curve("modified rollout", [[0, 0.1], [5, 0.4], [9, -0.9]], "#1818d0"),
        ];
        const markers = [
            { label: "retained prefix ends", point: [5, 0.5], color: "#0a7d2c" },
            { label: "operator split", point: [5, 0.5], color: "#1c4fd0" },
        ];
        const summary = renderOverlay(ctx, WIDTH, HEIGHT, fixture, markers);
        expect(summary).toEqual({ curves: 4, arrows: 4, markers: 2 });
        expect(ctx.count("arc")).toBe(2); // marker dots
        expect(ctx.count("fillText")).toBe(4 + 2); // legends + marker labels
        expect(ctx.count("stroke")).toBe(4 + 4); // polylines + arrowheads
    });

    it("projects every drawn point inside the canvas", () => {
        const ctx = new RecordingContext();
        renderOverlay(ctx, WIDTH, HEIGHT, [
            curve("wild", [[-1000, 5], [2000, -40], [0, 900]]),
        ]);
        for (const entry of ctx.ops) {
            if (entry.op === "moveTo" || entry.op === "lineTo") {
                const [x, y] = entry.args as [number, number];
                expect(x).toBeGreaterThanOrEqual(0);
                expect(x).toBeLessThanOrEqual(WIDTH);
                expect(y).toBeGreaterThanOrEqual(0);
                expect(y).toBeLessThanOrEqual(HEIGHT);
            }
        }
    });
});

describe("fitViewport", () => {
    it("maps the bounding box corners into the padded frame", () => {
        const project = fitViewport(
            [curve("c", [[0, 0], [10, 20]])], 800, 500, 24,
        );
        const [x0, y0] = project([0, 0]);
        const [x1, y1] = project([10, 20]);
        expect(Math.min(x0, x1)).toBeGreaterThanOrEqual(24 - 1e-9);
        expect(Math.max(x0, x1)).toBeLessThanOrEqual(800 - 24 + 1e-9);
        expect(Math.min(y0, y1)).toBeGreaterThanOrEqual(24 - 1e-9);
        expect(Math.max(y0, y1)).toBeLessThanOrEqual(500 - 24 + 1e-9);
    });

    it("preserves aspect ratio", () => {
        const project = fitViewport([curve("c", [[0, 0], [10, 10]])], 800, 500, 0);
        const [ax, ay] = project([0, 0]);
        const [bx, by] = project([10, 10]);
        expect(Math.abs(bx - ax)).toBeCloseTo(Math.abs(by - ay), 9);
    });

    it("is the identity when there is nothing to fit", () => {
        const project = fitViewport([], 800, 500);
        expect(project([7, 9])).toEqual([7, 9]);
    });
});
