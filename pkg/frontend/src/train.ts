/**
 * Training and evaluation: next-byte top-1 accuracy (P_ml) against the
 * random-guessing baseline P_g = 100/256 %.
 */

import * as tf from "@tensorflow/tfjs";

import { PredictorDataset } from "./dataset";
import { encodeBatch } from "./model";

/** Random-guessing baseline: 1/256, in percent. */
export const P_G_PERCENT = 0.390625;

export interface Hyper {
  epochs: number;
  batchSize: number;
  learningRate: number;
  /** Stop when the epoch loss fails to improve this many times in a row. */
  earlyStopPatience: number;
}

export const DEFAULT_HYPER: Hyper = {
  epochs: 50,
  batchSize: 128,
  learningRate: 1e-3,
  earlyStopPatience: 5,
};

export interface PredictionReport {
  p_ml_percent: number;
  p_g_percent: number;
  /** Wilson 95% interval for the test accuracy, in percent. */
  ci95: [number, number];
  epochs_run: number;
  hyper: Hyper;
  loss_curve: number[];
  test_windows: number;
  dataset: {
    source_label: string;
    stage: string;
    byte_length: number;
    window: number;
    stride: number;
    split: number;
    shuffle_seed: number;
  };
}

function* batches(starts: Int32Array, batchSize: number): Generator<Int32Array> {
  for (let i = 0; i < starts.length; i += batchSize) {
    yield starts.subarray(i, Math.min(i + batchSize, starts.length));
  }
}

/** Train in place; returns the per-epoch mean loss curve. */
export async function train(
  model: tf.LayersModel,
  dataset: PredictorDataset,
  hyper: Hyper = DEFAULT_HYPER
): Promise<number[]> {
  if (dataset.trainStarts.length === 0) {
    throw new Error("empty train split");
  }
  const { bytes, descriptor } = dataset;
  const lossCurve: number[] = [];
  let best = Infinity;
  let sinceImprovement = 0;
  for (let epoch = 0; epoch < hyper.epochs; epoch++) {
    let lossSum = 0;
    let batchCount = 0;
    for (const batch of batches(dataset.trainStarts, hyper.batchSize)) {
      const { xs, ys } = encodeBatch(bytes, batch, descriptor.window);
      const history = await model.trainOnBatch(xs, ys);
      xs.dispose();
      ys.dispose();
      const loss = Array.isArray(history) ? history[0] : (history as number);
      if (!Number.isFinite(loss)) {
        throw new Error(`training diverged: non-finite loss at epoch ${epoch}`);
      }
      lossSum += loss;
      batchCount += 1;
    }
    const epochLoss = lossSum / batchCount;
    lossCurve.push(epochLoss);
    if (epochLoss < best - 1e-6) {
      best = epochLoss;
      sinceImprovement = 0;
    } else {
      sinceImprovement += 1;
      if (sinceImprovement >= hyper.earlyStopPatience) break;
    }
  }
  return lossCurve;
}

/** Wilson score 95% interval for a binomial proportion, as fractions. */
export function wilson95(successes: number, trials: number): [number, number] {
  if (trials === 0) throw new Error("empty test split");
  const z = 1.959963984540054;
  const p = successes / trials;
  const z2 = z * z;
  const denom = 1 + z2 / trials;
  const center = (p + z2 / (2 * trials)) / denom;
  const half =
    (z * Math.sqrt((p * (1 - p)) / trials + z2 / (4 * trials * trials))) /
    denom;
  return [Math.max(0, center - half), Math.min(1, center + half)];
}

/** Top-1 accuracy over the test split, as a fraction. */
export async function testAccuracy(
  model: tf.LayersModel,
  dataset: PredictorDataset,
  batchSize = 256
): Promise<{ correct: number; total: number }> {
  if (dataset.testStarts.length === 0) {
    throw new Error("empty test split");
  }
  const { bytes, descriptor } = dataset;
  let correct = 0;
  for (const batch of batches(dataset.testStarts, batchSize)) {
    const { xs, ys } = encodeBatch(bytes, batch, descriptor.window);
    const matches = tf.tidy(() => {
      const pred = (model.predict(xs) as tf.Tensor2D).argMax(1);
      const truth = ys.argMax(1);
      return pred.equal(truth).sum();
    });
    correct += (await matches.data())[0];
    matches.dispose();
    xs.dispose();
    ys.dispose();
  }
  return { correct, total: dataset.testStarts.length };
}

/** Evaluate a trained model into a PredictionReport. */
export async function evaluate(
  model: tf.LayersModel,
  dataset: PredictorDataset,
  hyper: Hyper,
  lossCurve: number[]
): Promise<PredictionReport> {
  const { correct, total } = await testAccuracy(model, dataset);
  const [lo, hi] = wilson95(correct, total);
  const d = dataset.descriptor;
  return {
    p_ml_percent: (100 * correct) / total,
    p_g_percent: P_G_PERCENT,
    ci95: [100 * lo, 100 * hi],
    epochs_run: lossCurve.length,
    hyper,
    loss_curve: lossCurve,
    test_windows: total,
    dataset: {
      source_label: d.source_label,
      stage: d.stage,
      byte_length: d.byte_length,
      window: d.window,
      stride: d.stride,
      split: d.split,
      shuffle_seed: d.shuffle_seed,
    },
  };
}

/** Train then evaluate: the whole job in one call. */
export async function trainAndEvaluate(
  model: tf.LayersModel,
  dataset: PredictorDataset,
  hyper: Hyper = DEFAULT_HYPER
): Promise<PredictionReport> {
  const lossCurve = await train(model, dataset, hyper);
  return evaluate(model, dataset, hyper, lossCurve);
}
