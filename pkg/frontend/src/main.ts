import { ServiceClient } from "./api";
import { Workbench, WorkbenchElements } from "./app";

const serviceUrl =
    new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8080";

function element<T extends HTMLElement>(id: string): T {
    const found = document.getElementById(id);
    if (found === null) {
        throw new Error(`missing element #${id}`);
    }
    return found as T;
}

const canvas = element<HTMLCanvasElement>("board");
const elements: WorkbenchElements = {
    canvas,
    submitDemo: element("submit-demo"),
    splitMarker: element("split-marker"),
    applyCorrection: element("apply-correction"),
    reset: element("reset"),
    lambdaSlider: element("lambda-slider"),
    lambdaValue: element("lambda-value"),
    status: element("status"),
};

new Workbench(elements, new ServiceClient(serviceUrl), canvas.getContext("2d"));
