"""The statistics toolbox on its own: chi-square, ANOVA, t-tests, gain scores.

Run:  python demos/demo_statistics.py
"""

from logictutor import chi_square_2x2, nlg, one_way_anova, problem_score, t_test

# Condition balance for 61 experimental vs 41 control students split into
# two behaviour groups: no evidence of imbalance.
chi = chi_square_2x2([[35, 26], [25, 16]])
print(f"chi2(1, N=102) = {chi.statistic:.2f}, p = {chi.p_value:.2f}")

# One-way ANOVA with its eta-squared effect size.
groups = [[61.0, 64.0, 59.5, 70.0], [75.0, 78.5, 74.0, 80.0], [62.0, 66.0, 61.0, 65.5]]
anova = one_way_anova(groups)
print(f"F({anova.df[0]},{anova.df[1]}) = {anova.statistic:.2f}, "
      f"p = {anova.p_value:.4f}, eta2 = {anova.effect_size:.2f}")

# Pooled and Welch t-tests with Cohen's d.
a = [77.0, 80.0, 79.5, 83.0, 76.0]
b = [65.0, 70.0, 62.0, 68.0, 64.0]
for variant in ("pooled", "welch"):
    t = t_test(a, b, variant)
    print(f"t({t.df[0]:.1f}) = {t.statistic:.2f}, p = {t.p_value:.4f}, d = {t.effect_size:.2f}  [{variant}]")

# Problem scoring and normalized learning gain.
score = problem_score(
    completed=True, elapsed_s=240.0, accepted=4, rejected=1,
    proof_length=4, par_time_s=300.0, reference_length=3,
)
print(f"\nproblem score {score.value:.1f} "
      f"(accuracy {score.accuracy:.2f}, time {score.time:.2f}, length {score.length:.2f})")
print(f"nlg(62.8 -> 77.4) = {nlg(62.8, 77.4):.3f}")
print(f"nlg(62.8 -> 62.8) = {nlg(62.8, 62.8):.3f}")
