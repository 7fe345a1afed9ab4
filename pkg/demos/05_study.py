"""
Do explainers agree more on regression or on classification?
============================================================

For each model kind and repetition a fresh dataset is drawn, the model is
fitted, and every held-out row is explained by LIME and KernelSHAP. The
average rank similarity per run goes into one of two samples, which are
then compared with a t-test. Outputs land in ``study_out/``.
"""

import sys

from explainsim.study import StudyConfig, emit_reports, run_study

out_dir = sys.argv[1] if len(sys.argv) > 1 else "study_out"
result = run_study(StudyConfig(master_seed=0))

for run in result.runs:
    print(f"{run.task:15s} {run.model_kind:12s} rep {run.rep}  {run.average:.3f}")

for task, s in result.summaries.items():
    print(f"{task}: mean {s.mean:.4f}, variance {s.variance:.5f}")
print(result.ttest.as_dict())
print(result.verdict())

paths = emit_reports(result, out_dir)
print(f"wrote {len(paths)} files to {out_dir}")
