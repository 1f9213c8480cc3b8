/**
 * Command-line entry: train the next-byte predictor on an exported
 * dataset and write a PredictionReport JSON that the bench can merge
 * back via its aggregate command.
 *
 *   node dist/cli.js <dataset.bytes> --out report.json [--epochs N] ...
 */

import { writeFileSync } from "fs";
import { parseArgs } from "util";

import { loadDataset } from "./dataset";
import { buildModel, PaddingMode } from "./model";
import { DEFAULT_HYPER, trainAndEvaluate } from "./train";

const USAGE = `usage: predict <dataset.bytes> [options]
  --out <path>          write the PredictionReport JSON here
  --epochs <n>          training epochs (default ${DEFAULT_HYPER.epochs})
  --batch <n>           batch size (default ${DEFAULT_HYPER.batchSize})
  --lr <x>              learning rate (default ${DEFAULT_HYPER.learningRate})
  --patience <n>        early-stop patience (default ${DEFAULT_HYPER.earlyStopPatience})
  --padding same|valid  convolution padding (default same)
  --max-windows <n>     cap the number of training windows`;

async function main(): Promise<number> {
  const { values, positionals } = parseArgs({
    allowPositionals: true,
    options: {
      out: { type: "string" },
      epochs: { type: "string" },
      batch: { type: "string" },
      lr: { type: "string" },
      patience: { type: "string" },
      padding: { type: "string" },
      "max-windows": { type: "string" },
      help: { type: "boolean" },
    },
  });
  if (values.help || positionals.length !== 1) {
    console.error(USAGE);
    return values.help ? 0 : 2;
  }
  const padding = (values.padding ?? "same") as PaddingMode;
  if (padding !== "same" && padding !== "valid") {
    console.error(`unknown padding ${values.padding}`);
    return 2;
  }
  const hyper = {
    epochs: values.epochs ? parseInt(values.epochs, 10) : DEFAULT_HYPER.epochs,
    batchSize: values.batch ? parseInt(values.batch, 10) : DEFAULT_HYPER.batchSize,
    learningRate: values.lr ? parseFloat(values.lr) : DEFAULT_HYPER.learningRate,
    earlyStopPatience: values.patience
      ? parseInt(values.patience, 10)
      : DEFAULT_HYPER.earlyStopPatience,
  };

  const dataset = loadDataset(positionals[0]);
  const maxWindows = values["max-windows"]
    ? parseInt(values["max-windows"], 10)
    : undefined;
  if (maxWindows && dataset.trainStarts.length > maxWindows) {
    dataset.trainStarts = dataset.trainStarts.slice(0, maxWindows);
  }
  const model = buildModel({
    window: dataset.descriptor.window,
    padding,
    learningRate: hyper.learningRate,
  });
  console.log(
    `training on ${dataset.trainStarts.length} windows ` +
      `(${dataset.descriptor.source_label}/${dataset.descriptor.stage}), ` +
      `testing on ${dataset.testStarts.length}`
  );
  const report = await trainAndEvaluate(model, dataset, hyper);
  console.log(
    `P_ml = ${report.p_ml_percent.toFixed(3)}% ` +
      `(95% CI ${report.ci95[0].toFixed(3)}..${report.ci95[1].toFixed(3)}), ` +
      `P_g = ${report.p_g_percent}%`
  );
  if (values.out) {
    writeFileSync(values.out, JSON.stringify(report, null, 2) + "\n");
    console.log(`report written: ${values.out}`);
  }
  return 0;
}

main()
  .then((code) => process.exit(code))
  .catch((err) => {
    console.error(`error: ${err.message}`);
    process.exit(1);
  });
