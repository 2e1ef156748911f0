// Overlay rendering: all trajectories share one fitted viewport and are drawn
// as polylines with a direction arrow; separation markers are labeled dots.
// The draw surface is expressed as a minimal interface so tests can record
// operations without a real canvas.

export interface DrawContext {
    strokeStyle: string | CanvasGradient | CanvasPattern;
    fillStyle: string | CanvasGradient | CanvasPattern;
    lineWidth: number;
    font: string;
    clearRect(x: number, y: number, w: number, h: number): void;
    strokeRect(x: number, y: number, w: number, h: number): void;
    beginPath(): void;
    moveTo(x: number, y: number): void;
    lineTo(x: number, y: number): void;
    arc(x: number, y: number, r: number, a0: number, a1: number): void;
    stroke(): void;
    fill(): void;
    fillText(text: string, x: number, y: number): void;
    setLineDash(segments: number[]): void;
}

export interface Curve {
    label: string;
    points: ReadonlyArray<ReadonlyArray<number>>;
    color: string;
    width?: number;
    dash?: number[];
}

export interface Marker {
    label: string;
    point: ReadonlyArray<number>;
    color: string;
}

export interface RenderSummary {
    curves: number;
    arrows: number;
    markers: number;
}

type Project = (point: ReadonlyArray<number>) => [number, number];

export function fitViewport(
    curves: ReadonlyArray<Curve>,
    width: number,
    height: number,
    pad = 24,
): Project {
    let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
    for (const curve of curves) {
        for (const point of curve.points) {
            xMin = Math.min(xMin, point[0]);
            xMax = Math.max(xMax, point[0]);
            yMin = Math.min(yMin, point[1]);
            yMax = Math.max(yMax, point[1]);
        }
    }
    if (!Number.isFinite(xMin)) {
        return (point) => [point[0], point[1]];
    }
    const spanX = Math.max(xMax - xMin, 1e-9);
    const spanY = Math.max(yMax - yMin, 1e-9);
    const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
    const offsetX = (width - scale * spanX) / 2;
    const offsetY = (height - scale * spanY) / 2;
    return (point) => [offsetX + scale * (point[0] - xMin), offsetY + scale * (point[1] - yMin)];
}

function drawArrow(ctx: DrawContext, from: [number, number], to: [number, number], color: string): void {
    const dx = to[0] - from[0];
    const dy = to[1] - from[1];
    const norm = Math.hypot(dx, dy);
    if (norm < 1e-9) {
        return;
    }
    const ux = dx / norm, uy = dy / norm;
    const size = 9;
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.setLineDash([]);
    ctx.beginPath();
    ctx.moveTo(to[0] - size * (ux + 0.5 * uy), to[1] - size * (uy - 0.5 * ux));
    ctx.lineTo(to[0], to[1]);
    ctx.lineTo(to[0] - size * (ux - 0.5 * uy), to[1] - size * (uy + 0.5 * ux));
    ctx.stroke();
}

export function renderOverlay(
    ctx: DrawContext,
    width: number,
    height: number,
    curves: ReadonlyArray<Curve>,
    markers: ReadonlyArray<Marker> = [],
): RenderSummary {
    ctx.clearRect(0, 0, width, height);
    ctx.setLineDash([]);
    ctx.strokeStyle = "#444";
    ctx.lineWidth = 1;
    ctx.strokeRect(0.5, 0.5, width - 1, height - 1);

    const summary: RenderSummary = { curves: 0, arrows: 0, markers: 0 };
    const drawable = curves.filter((curve) => curve.points.length >= 2);
    const project = fitViewport(drawable, width, height);

    let legendY = 18;
    for (const curve of drawable) {
        ctx.strokeStyle = curve.color;
        ctx.lineWidth = curve.width ?? 2;
        ctx.setLineDash(curve.dash ?? []);
        ctx.beginPath();
        const first = project(curve.points[0]);
        ctx.moveTo(first[0], first[1]);
        for (let index = 1; index < curve.points.length; index += 1) {
            const mapped = project(curve.points[index]);
            ctx.lineTo(mapped[0], mapped[1]);
        }
        ctx.stroke();
        summary.curves += 1;

        const anchor = Math.max(1, Math.floor(curve.points.length * 0.25));
        drawArrow(ctx, project(curve.points[anchor - 1]), project(curve.points[anchor]), curve.color);
        summary.arrows += 1;

        ctx.fillStyle = curve.color;
        ctx.font = "12px sans-serif";
        ctx.fillText(curve.label, 10, legendY);
        legendY += 16;
    }

    for (const marker of markers) {
        const mapped = project(marker.point);
        ctx.fillStyle = marker.color;
        ctx.setLineDash([]);
        ctx.beginPath();
        ctx.arc(mapped[0], mapped[1], 5, 0, 2 * Math.PI);
        ctx.fill();
        ctx.font = "11px sans-serif";
        ctx.fillText(marker.label, mapped[0] + 8, mapped[1] - 8);
        summary.markers += 1;
    }
    return summary;
}
