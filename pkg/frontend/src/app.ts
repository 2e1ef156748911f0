// Workbench: the human plays the operator. Draw a demonstration, roll out
// its primitive, draw a correction over the deficient rollout (pressing the
// split button where the retained part begins), and inspect the merged
// trajectory and the modified primitive's rollout as overlaid curves.
//
// The UI does no trajectory math: deficient, merged, and resulting curves
// are rendered exactly as the service returned them, and the drawn inputs
// are rendered exactly as captured.

import { CorrectionPayload, ServiceClient, TrajectoryPayload } from "./api";
import { CanvasCapture } from "./capture";
import { Curve, DrawContext, Marker, renderOverlay, RenderSummary } from "./overlay";

export type Phase = "demo" | "correction" | "corrected";

export const COLORS = {
    drawn: "#888888",
    deficient: "#e08080",
    corrective: "#d01818",
    merged: "#188018",
    rollout: "#1818d0",
    deficientMarker: "#0a7d2c",
    correctiveMarker: "#1c4fd0",
};

export interface WorkbenchElements {
    canvas: HTMLCanvasElement;
    submitDemo: HTMLButtonElement;
    splitMarker: HTMLButtonElement;
    applyCorrection: HTMLButtonElement;
    reset: HTMLButtonElement;
    lambdaSlider: HTMLInputElement;
    lambdaValue: HTMLElement;
    status: HTMLElement;
}

export function lambdaFromSlider(sliderValue: string | number): number {
    return 10 ** Number(sliderValue);
}

export class Workbench {
    readonly capture: CanvasCapture;
    phase: Phase = "demo";
    session: string | null = null;

    deficient: TrajectoryPayload | null = null;
    corrective: TrajectoryPayload | null = null;
    correctiveCut: number | null = null;
    correction: CorrectionPayload | null = null;
    resulting: TrajectoryPayload | null = null;
    lastSummary: RenderSummary = { curves: 0, arrows: 0, markers: 0 };

    private inflight: AbortController | null = null;

    constructor(
        private readonly elements: WorkbenchElements,
        private readonly client: ServiceClient,
        private readonly context: DrawContext | null,
        capturePeriodMs = 20,
    ) {
        this.capture = new CanvasCapture(elements.canvas, capturePeriodMs, () => this.render());
        this.capture.attach();
        elements.submitDemo.addEventListener("click", () => void this.submitDemo());
        elements.splitMarker.addEventListener("click", () => this.markSplit());
        elements.applyCorrection.addEventListener("click", () => void this.applyCorrection());
        elements.reset.addEventListener("click", () => this.resetAll());
        elements.lambdaSlider.addEventListener("input", () => this.showLambda());
        elements.lambdaSlider.addEventListener("change", () => void this.recorrect());
        this.showLambda();
        this.render();
    }

    get lambda(): number {
        return lambdaFromSlider(this.elements.lambdaSlider.value);
    }

    private showLambda(): void {
        this.elements.lambdaValue.textContent = this.lambda.toPrecision(3);
    }

    status(text: string): void {
        this.elements.status.textContent = text;
    }

    private async ensureSession(): Promise<string> {
        if (this.session === null) {
            this.session = await this.client.createSession();
        }
        return this.session;
    }

    async submitDemo(): Promise<void> {
        const drawn = this.capture.result();
        if (drawn.samples.length < 3) {
            this.status("Draw a demonstration first: at least 3 samples are needed.");
            return;
        }
        try {
            const session = await this.ensureSession();
            await this.client.uploadTrajectory(session, "demo", drawn.dt, drawn.samples);
            await this.client.fit(session, { trajectory: "demo", name: "demo-dmp" });
            this.deficient = await this.client.rollout(session, { dmp: "demo-dmp" });
            await this.client.uploadTrajectory(session, "deficient", this.deficient.dt, this.deficient.samples);
            this.capture.reset();
            this.phase = "correction";
            this.status("Rolled out. Draw the correction; press Split where the retained part begins.");
        } catch (error) {
            this.status(`Demo submission failed: ${(error as Error).message}`);
        }
        this.render();
    }

    markSplit(): void {
        if (this.phase !== "correction") {
            this.status("Split marks the retained part of a correction; draw the correction first.");
            return;
        }
        this.capture.markSplit();
        this.status(`Split marked at sample ${this.capture.cut}.`);
    }

    async applyCorrection(): Promise<void> {
        const drawn = this.capture.result();
        if (drawn.samples.length < 3) {
            this.status("Draw a correction first: at least 3 samples are needed.");
            return;
        }
        if (drawn.cut === null) {
            this.status("Press Split during the correction to mark where the retained part begins.");
            return;
        }
        if (drawn.cut > drawn.samples.length - 2) {
            this.status("The split needs at least 2 samples after it; keep drawing past the split.");
            return;
        }
        try {
            const session = await this.ensureSession();
            await this.client.uploadTrajectory(session, "corrective", drawn.dt, drawn.samples);
            this.corrective = { dt: drawn.dt, samples: drawn.samples };
            this.correctiveCut = drawn.cut;
            this.capture.reset();
            await this.recorrect();
        } catch (error) {
            this.status(`Correction failed: ${(error as Error).message}`);
        }
    }

    /** Run (or re-run, e.g. from the slider) the correction at the current lambda. */
    async recorrect(): Promise<void> {
        if (this.session === null || this.deficient === null || this.correctiveCut === null) {
            return;
        }
        this.inflight?.abort();
        const controller = new AbortController();
        this.inflight = controller;
        try {
            const correction = await this.client.correct(this.session, {
                deficient: "deficient",
                corrective: "corrective",
                cut: this.correctiveCut,
                lambda: this.lambda,
                name: "modified-dmp",
            }, controller.signal);
            const resulting = await this.client.rollout(this.session, {
                dmp: "modified-dmp",
                start: this.deficient.samples[0],
            }, controller.signal);
            if (controller.signal.aborted) {
                return;
            }
            this.correction = correction;
            this.resulting = resulting;
            this.phase = "corrected";
            this.status(
                `Merged at deficient sample ${correction.split.M} `
                + `(distance ${correction.split.d_m.toPrecision(3)}); lambda = ${this.lambda.toPrecision(3)}.`,
            );
            this.render();
        } catch (error) {
            if (!controller.signal.aborted) {
                this.status(`Correction failed: ${(error as Error).message}`);
            }
        } finally {
            if (this.inflight === controller) {
                this.inflight = null;
            }
        }
    }

    resetAll(): void {
        this.inflight?.abort();
        this.inflight = null;
        this.capture.reset();
        this.phase = "demo";
        this.session = null;
        this.deficient = null;
        this.corrective = null;
        this.correctiveCut = null;
        this.correction = null;
        this.resulting = null;
        this.status("Draw a demonstration on the canvas, then submit it.");
        this.render();
    }

    curves(): Curve[] {
        const out: Curve[] = [];
        if (this.deficient !== null) {
            out.push({ label: "deficient rollout", points: this.deficient.samples, color: COLORS.deficient, width: 4 });
        }
        if (this.phase === "corrected" && this.corrective !== null) {
            out.push({ label: "corrective (drawn)", points: this.corrective.samples, color: COLORS.corrective, width: 2 });
        }
        if (this.correction !== null) {
            out.push({ label: "merged", points: this.correction.merged.samples, color: COLORS.merged, width: 2, dash: [6, 3] });
        }
        if (this.resulting !== null) {
            out.push({ label: "modified rollout", points: this.resulting.samples, color: COLORS.rollout, width: 2 });
        }
        if (this.capture.sampleCount >= 2) {
            const label = this.phase === "demo" ? "demonstration (drawing)" : "correction (drawing)";
            out.push({ label, points: this.capture.points, color: COLORS.drawn, width: 1 });
        }
        return out;
    }

    markers(): Marker[] {
        if (this.phase !== "corrected" || this.correction === null || this.corrective === null) {
            return [];
        }
        const split = this.correction.split;
        const deficientPoint = this.deficient!.samples[split.M - 1];
        const correctivePoint = this.corrective.samples[split.corrective_cut];
        return [
            { label: "retained prefix ends", point: deficientPoint, color: COLORS.deficientMarker },
            { label: "operator split", point: correctivePoint, color: COLORS.correctiveMarker },
        ];
    }

    render(): void {
        if (this.context === null) {
            return;
        }
        const { width, height } = this.elements.canvas;
        this.lastSummary = renderOverlay(this.context, width, height, this.curves(), this.markers());
    }
}
