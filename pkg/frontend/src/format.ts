// Failure-rate formatting with digit-for-digit parity to the backend's
// canonical reports: round-half-even on the exact rational 100*failures/total,
// computed in integers so no binary-float artifact can creep in.

export function formatRate(failures: number, total: number): string {
  if (total <= 0) return "0.00";
  const numerator = 10000 * failures;
  let hundredths = Math.floor(numerator / total);
  const remainder = numerator % total;
  if (2 * remainder > total || (2 * remainder === total && hundredths % 2 === 1)) {
    hundredths += 1;
  }
  const whole = Math.floor(hundredths / 100);
  const frac = hundredths % 100;
  return `${whole}.${frac.toString().padStart(2, "0")}`;
}

export function formatScore(score: number): string {
  // display-only; answer payloads are never mutated
  return score.toFixed(4);
}
