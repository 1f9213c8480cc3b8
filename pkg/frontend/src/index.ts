export {
  DatasetDescriptor,
  PredictorDataset,
  buildDataset,
  loadDataset,
  mulberry32,
  splitStarts,
  syntheticDescriptor,
  windowStarts,
} from "./dataset";
export { ALPHABET, ModelOptions, PaddingMode, buildModel, encodeBatch } from "./model";
export {
  DEFAULT_HYPER,
  Hyper,
  P_G_PERCENT,
  PredictionReport,
  evaluate,
  testAccuracy,
  train,
  trainAndEvaluate,
  wilson95,
} from "./train";
