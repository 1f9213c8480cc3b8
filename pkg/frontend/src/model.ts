/**
 * CNN+LSTM next-byte model.
 *
 * Input: `window` one-hot encoded bytes (window x 256). Two convolution +
 * max-pool stages feed an LSTM whose final state passes through a sigmoid
 * dense layer into a 256-way softmax. With same-padding the length chain
 * is 100 -> 50 -> 25; valid padding (96 -> 48 -> 46 -> 23) is an option.
 */

import * as tf from "@tensorflow/tfjs";

export type PaddingMode = "same" | "valid";

export interface ModelOptions {
  window?: number;
  padding?: PaddingMode;
  learningRate?: number;
}

export const ALPHABET = 256;

export function buildModel(options: ModelOptions = {}): tf.LayersModel {
  const window = options.window ?? 100;
  const padding = options.padding ?? "same";
  const model = tf.sequential();
  model.add(
    tf.layers.conv1d({
      inputShape: [window, ALPHABET],
      filters: 64,
      kernelSize: 5,
      padding,
      activation: "relu",
    })
  );
  model.add(tf.layers.maxPooling1d({ poolSize: 2 }));
  model.add(
    tf.layers.conv1d({
      filters: 128,
      kernelSize: 3,
      padding,
      activation: "relu",
    })
  );
  model.add(tf.layers.maxPooling1d({ poolSize: 2 }));
  // glorotUniform instead of the default orthogonal recurrent initializer:
  // orthogonalizing the 128x512 recurrent kernel takes >10s on the pure-JS
  // CPU backend and does not change what these experiments measure.
  model.add(tf.layers.lstm({ units: 128, recurrentInitializer: "glorotUniform" }));
  model.add(tf.layers.dense({ units: 64, activation: "sigmoid" }));
  model.add(tf.layers.dense({ units: ALPHABET, activation: "softmax" }));

  if (padding === "same" && window % 4 === 0) {
    // Assert the documented length chain, e.g. 100 -> 50 -> 25.
    const afterPool1 = model.layers[1].outputShape as number[];
    const afterPool2 = model.layers[3].outputShape as number[];
    if (afterPool1[1] !== window / 2 || afterPool2[1] !== window / 4) {
      throw new Error(
        `unexpected length chain: ${afterPool1[1]}, ${afterPool2[1]}`
      );
    }
  }

  model.compile({
    optimizer: tf.train.adam(options.learningRate ?? 1e-3),
    loss: "categoricalCrossentropy",
    metrics: ["accuracy"],
  });
  return model;
}

/** One-hot encode a batch of windows plus targets. Caller disposes. */
export function encodeBatch(
  bytes: Uint8Array,
  starts: ArrayLike<number>,
  window: number
): { xs: tf.Tensor3D; ys: tf.Tensor2D } {
  const n = starts.length;
  const idx = new Int32Array(n * window);
  const targets = new Int32Array(n);
  for (let i = 0; i < n; i++) {
    const s = starts[i];
    for (let j = 0; j < window; j++) idx[i * window + j] = bytes[s + j];
    targets[i] = bytes[s + window];
  }
  return tf.tidy(() => {
    const xs = tf
      .oneHot(tf.tensor2d(idx, [n, window], "int32"), ALPHABET)
      .asType("float32") as tf.Tensor3D;
    const ys = tf
      .oneHot(tf.tensor1d(targets, "int32"), ALPHABET)
      .asType("float32") as tf.Tensor2D;
    return { xs, ys };
  });
}
