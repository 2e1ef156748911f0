// Freehand capture: pointer positions are sampled at a fixed cadence while a
// stroke is active, accumulating across strokes into one 2-D trajectory. The
// split button records the index where the retained part of a correction
// begins (the sample count at press time, i.e. the next sample captured).

export interface CaptureResult {
    dt: number;
    samples: [number, number][];
    cut: number | null;
}

export class CanvasCapture {
    private samples: [number, number][] = [];
    private cutIndex: number | null = null;
    private pointer: [number, number] | null = null;
    private timer: ReturnType<typeof setInterval> | null = null;
    private readonly listeners: Array<[string, (event: Event) => void]> = [];

    constructor(
        private readonly target: HTMLElement,
        private readonly periodMs: number = 20,
        private readonly onSample: () => void = () => {},
    ) {}

    attach(): void {
        const down = (event: Event) => this.handleDown(event as PointerEvent);
        const move = (event: Event) => this.handleMove(event as PointerEvent);
        const up = () => this.handleUp();
        this.target.addEventListener("pointerdown", down);
        this.target.addEventListener("pointermove", move);
        this.target.addEventListener("pointerup", up);
        this.target.addEventListener("pointerleave", up);
        this.listeners.push(["pointerdown", down], ["pointermove", move], ["pointerup", up], ["pointerleave", up]);
    }

    detach(): void {
        this.handleUp();
        for (const [type, listener] of this.listeners) {
            this.target.removeEventListener(type, listener);
        }
        this.listeners.length = 0;
    }

    private position(event: PointerEvent): [number, number] {
        const rect = this.target.getBoundingClientRect();
        return [event.clientX - rect.left, event.clientY - rect.top];
    }

    private handleDown(event: PointerEvent): void {
        this.pointer = this.position(event);
        this.record();
        if (this.timer === null) {
            this.timer = setInterval(() => this.record(), this.periodMs);
        }
    }

    private handleMove(event: PointerEvent): void {
        if (this.timer !== null) {
            this.pointer = this.position(event);
        }
    }

    private handleUp(): void {
        if (this.timer !== null) {
            clearInterval(this.timer);
            this.timer = null;
        }
        this.pointer = null;
    }

    private record(): void {
        if (this.pointer !== null) {
            this.samples.push([this.pointer[0], this.pointer[1]]);
            this.onSample();
        }
    }

    get drawing(): boolean {
        return this.timer !== null;
    }

    get sampleCount(): number {
        return this.samples.length;
    }

    get cut(): number | null {
        return this.cutIndex;
    }

    get points(): ReadonlyArray<[number, number]> {
        return this.samples;
    }

    /** Mark the split: the next captured sample starts the retained part. */
    markSplit(): void {
        this.cutIndex = this.samples.length;
    }

    reset(): void {
        this.handleUp();
        this.samples = [];
        this.cutIndex = null;
    }

    result(): CaptureResult {
        return {
            dt: this.periodMs / 1000,
            samples: this.samples.map((point) => [point[0], point[1]]),
            cut: this.cutIndex,
        };
    }
}
