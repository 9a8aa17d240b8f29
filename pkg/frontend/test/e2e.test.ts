/** End-to-end flow against a live analysis service.
 *
 * Run `galdep serve --port 8787` and set GALDEP_SERVER=http://127.0.0.1:8787
 * (the exact URL) before `npm test` to enable; skipped otherwise. The flow
 * mirrors the convolution walkthrough: select output cell (2,2), check the
 * computed input layer, round-trip forwards and check that (1,1) joins the
 * selection.
 */

import { describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { matrixMarks } from "../src/model.js";

const server = process.env.GALDEP_SERVER;

describe.skipIf(!server)("against a live service", () => {
  const client = new Client(server!, fetch);

  it("walks the convolution demo end to end", async () => {
    const session = await client.openExample("convolve");
    const bwd = await client.bwd(session.id,
                                 { paths: [{ path: [{ cell: [2, 2] }] }] });
    const imageMarks = matrixMarks(bwd.env["image"]);
    const kernelMarks = matrixMarks(bwd.env["kernel"]);
    const expectedImage = new Set<string>();
    for (const i of [1, 2, 3]) {
      for (const j of [1, 2, 3]) {
        if (!(i === 1 && j === 3) && !(i === 3 && j === 1)) {
          expectedImage.add(`${i},${j}`);
        }
      }
    }
    expect(imageMarks).toEqual(expectedImage);
    expect(kernelMarks.size).toBe(9);

    const fwd = await client.fwd(session.id, bwd.env_doc, bwd.highlights);
    const available = matrixMarks(fwd.output);
    expect(available.has("2,2")).toBe(true);
    expect(available.has("1,1")).toBe(true);

    const grew = await client.leq(
      session.id, { paths: [{ path: [{ cell: [2, 2] }] }] }, fwd.output_doc);
    expect(grew).toBe(true);
  });

  it("links the two convolution views", async () => {
    const session = await client.openExample("convolve-pair");
    const linked = await client.link(
      session.id, { paths: [{ path: [{ cell: [2, 2] }] }] }, "embossed");
    expect(linked.to).toBe("sharpened");
    expect(matrixMarks(linked.other).size).toBeGreaterThan(0);
  });
});
