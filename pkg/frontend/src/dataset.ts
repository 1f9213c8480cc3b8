/**
 * Dataset loading and windowing.
 *
 * Input is the bench's export pair: a raw byte payload (`*.bytes`) plus a
 * JSON descriptor (`*.bytes.meta`) recording the windowing parameters and
 * the payload's SHA-256. Windows of `window` bytes predict the byte that
 * immediately follows; the train/test split is a seeded shuffle so the
 * same descriptor always yields the same partition.
 */

import { createHash } from "crypto";
import { readFileSync } from "fs";

export interface DatasetDescriptor {
  source_label: string;
  stage: string;
  byte_length: number;
  dropped_remainder_bits: number;
  window: number;
  stride: number;
  split: number;
  shuffle_seed: number;
  sha256_of_payload: string;
}

export interface PredictorDataset {
  bytes: Uint8Array;
  descriptor: DatasetDescriptor;
  /** Window start offsets, index i predicts byte at i + window. */
  trainStarts: Int32Array;
  testStarts: Int32Array;
}

/** Deterministic 32-bit PRNG (mulberry32) for the shuffle. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function windowStarts(
  length: number,
  window: number,
  stride: number
): Int32Array {
  if (window < 1 || stride < 1) {
    throw new Error(`window and stride must be >= 1`);
  }
  if (length < window + 1) {
    throw new Error(
      `stream of ${length} bytes too short for window ${window} (+1 target)`
    );
  }
  const count = Math.floor((length - window - 1) / stride) + 1;
  const starts = new Int32Array(count);
  for (let i = 0; i < count; i++) starts[i] = i * stride;
  return starts;
}

export function splitStarts(
  starts: Int32Array,
  split: number,
  shuffleSeed: number
): { train: Int32Array; test: Int32Array } {
  if (!(split > 0 && split < 1)) {
    throw new Error(`split fraction ${split} outside (0, 1)`);
  }
  const shuffled = Int32Array.from(starts);
  const rand = mulberry32(shuffleSeed);
  for (let i = shuffled.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    const tmp = shuffled[i];
    shuffled[i] = shuffled[j];
    shuffled[j] = tmp;
  }
  const nTrain = Math.floor(shuffled.length * split);
  return {
    train: shuffled.slice(0, nTrain),
    test: shuffled.slice(nTrain),
  };
}

export function buildDataset(
  bytes: Uint8Array,
  descriptor: DatasetDescriptor
): PredictorDataset {
  const starts = windowStarts(
    bytes.length,
    descriptor.window,
    descriptor.stride
  );
  const { train, test } = splitStarts(
    starts,
    descriptor.split,
    descriptor.shuffle_seed
  );
  return { bytes, descriptor, trainStarts: train, testStarts: test };
}

/** Load an exported dataset, verifying the descriptor's payload hash. */
export function loadDataset(bytesPath: string): PredictorDataset {
  const payload = new Uint8Array(readFileSync(bytesPath));
  const descriptor: DatasetDescriptor = JSON.parse(
    readFileSync(`${bytesPath}.meta`, "utf8")
  );
  const digest = createHash("sha256").update(payload).digest("hex");
  if (digest !== descriptor.sha256_of_payload) {
    throw new Error(`payload hash mismatch for ${bytesPath}`);
  }
  if (payload.length !== descriptor.byte_length) {
    throw new Error(
      `payload is ${payload.length} bytes, descriptor says ${descriptor.byte_length}`
    );
  }
  return buildDataset(payload, descriptor);
}

/** Synthetic descriptor for in-memory byte arrays (tests, experiments). */
export function syntheticDescriptor(
  bytes: Uint8Array,
  overrides: Partial<DatasetDescriptor> = {}
): DatasetDescriptor {
  return {
    source_label: "synthetic",
    stage: "pre",
    byte_length: bytes.length,
    dropped_remainder_bits: 0,
    window: 100,
    stride: 1,
    split: 0.8,
    shuffle_seed: 7,
    sha256_of_payload: createHash("sha256").update(bytes).digest("hex"),
    ...overrides,
  };
}
