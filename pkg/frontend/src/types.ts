/**
 * Wire types for the coleforge editor service, validated with zod so a
 * drifting server fails loudly at the boundary instead of deep in the UI.
 */

import { z } from "zod";

export const AttrRangeSchema = z.object({
  lo: z.number(),
  hi: z.number(),
  n_bins: z.number().int().positive(),
});

export const CodecInfoSchema = z.object({
  attributes: z.record(z.string(), AttrRangeSchema),
  edit_ops: z.array(z.string()),
});

export const DesignSummarySchema = z.object({
  id: z.string(),
  intent: z.string(),
  category: z.string(),
  version: z.number().int().nonnegative(),
});

export const TypographyBlockSchema = z.object({
  text: z.string(),
  font_family: z.string(),
  font_size: z.number(),
  angle: z.number(),
  color_r: z.number().int(),
  color_g: z.number().int(),
  color_b: z.number().int(),
  opacity: z.number(),
  left: z.number(),
  top: z.number(),
  width: z.number(),
  height: z.number(),
  letter_spacing: z.number(),
  line_spacing: z.number(),
  alignment: z.string(),
  role: z.string(),
});

export const PlanSchema = z.object({
  global_caption: z.string(),
  category: z.string(),
  keywords: z.array(z.string()),
  background_caption: z.string(),
  object_flag: z.boolean(),
  object_caption: z.string(),
  heading: z.string(),
  sub_heading: z.string(),
  body_text: z.string(),
});

export const ObjectTransformSchema = z.object({
  dx: z.number(),
  dy: z.number(),
  scale: z.number(),
});

export const ReflectStepSchema = z
  .object({
    iteration: z.number().int().optional(),
    accepted: z.boolean().optional(),
    mean: z.number().optional(),
    error: z.string().optional(),
  })
  .passthrough();

export const ProvenanceSchema = z
  .object({
    seed: z.number().int(),
    backend_ids: z.record(z.string(), z.string()),
    reflect_history: z.array(ReflectStepSchema),
  })
  .passthrough();

export const ScoreReportSchema = z
  .object({
    mean: z.number(),
    criteria: z.record(z.string(), z.number()).optional(),
  })
  .passthrough()
  .nullable();

export const BundleSchema = z.object({
  schema_version: z.number().int(),
  intent: z.object({ text: z.string(), category: z.string() }),
  plan: PlanSchema,
  typography: z.array(TypographyBlockSchema),
  object_transform: ObjectTransformSchema.nullable(),
  background_png_base64: z.string(),
  object_png_base64: z.string().nullable(),
  alpha_png_base64: z.string().nullable(),
  svg: z.string(),
  layer_index: z.record(z.string(), z.string()),
  provenance: ProvenanceSchema,
  scores: ScoreReportSchema.optional(),
});

export const DesignDetailSchema = z.object({
  id: z.string(),
  version: z.number().int().nonnegative(),
  bundle: BundleSchema,
});

export const EditAckSchema = z.object({
  id: z.string(),
  version: z.number().int().nonnegative(),
});

export type AttrRange = z.infer<typeof AttrRangeSchema>;
export type CodecInfo = z.infer<typeof CodecInfoSchema>;
export type DesignSummary = z.infer<typeof DesignSummarySchema>;
export type TypographyBlock = z.infer<typeof TypographyBlockSchema>;
export type Bundle = z.infer<typeof BundleSchema>;
export type DesignDetail = z.infer<typeof DesignDetailSchema>;
export type EditAck = z.infer<typeof EditAckSchema>;

/** Edit operations mirror the service vocabulary one-to-one. */
export type EditOp =
  | { op: "move_block"; block_index: number; dx: number; dy: number }
  | { op: "resize_block"; block_index: number; width: number; height: number }
  | { op: "set_text"; block_index: number; text: string }
  | { op: "set_attribute"; block_index: number; attr: string; value: number | string }
  | { op: "move_object"; dx: number; dy: number }
  | { op: "scale_object"; factor: number }
  | { op: "undo" };
