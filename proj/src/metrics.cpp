#include "fpcal/metrics.hpp"

#include "fpcal/error.hpp"

#include <cmath>
#include <string>

namespace fpcal {

double mre(double estimated, double actual) {
    if (!(actual > 0.0)) throw InvalidInput("MRE needs a positive actual value, got " + std::to_string(actual));
    return std::fabs(estimated - actual) / actual;
}

double mmre(std::span<const EstimatePair> pairs) {
    if (pairs.empty()) throw InvalidInput("MMRE of an empty set");
    double sum = 0.0;
    for (const EstimatePair& p : pairs) sum += mre(p.estimated, p.actual);
    return sum / static_cast<double>(pairs.size());
}

double pred(std::span<const EstimatePair> pairs, double p) {
    if (pairs.empty()) throw InvalidInput("PRED of an empty set");
    if (!(p >= 0.0)) throw InvalidInput("PRED level must be nonnegative");
    std::size_t hits = 0;
    for (const EstimatePair& e : pairs) {
        if (mre(e.estimated, e.actual) <= p) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double improvement(double mmre_original, double mmre_calibrated) {
    if (!(mmre_original > 0.0)) throw NumericError("improvement is undefined when the original MMRE is 0");
    return (mmre_original - mmre_calibrated) / mmre_original;
}

EvaluationReport evaluate(std::span<const ProjectRecord> test, const WeightTable& original,
                          const WeightTable& calibrated, const RegressionModel& model,
                          const std::vector<double>& pred_levels) {
    if (test.empty()) throw InvalidInput("evaluation needs a nonempty test set");
    std::vector<EstimatePair> orig, cal;
    orig.reserve(test.size());
    cal.reserve(test.size());
    for (const ProjectRecord& r : test) {
        if (!r.breakdown) throw InvalidInput("test project '" + r.id + "' has no UFP breakdown");
        const double u0 = compute_ufp(*r.breakdown, original);
        const double u1 = compute_ufp(*r.breakdown, calibrated);
        if (!(u0 > 0.0) || !(u1 > 0.0)) throw InvalidInput("test project '" + r.id + "' has UFP = 0");
        orig.push_back({predict_effort(model, u0), r.effort});
        cal.push_back({predict_effort(model, u1), r.effort});
    }

    EvaluationReport rep;
    rep.n_test = test.size();
    rep.mmre_original = mmre(orig);
    rep.mmre_calibrated = mmre(cal);
    rep.pred_levels = pred_levels;
    for (double p : pred_levels) {
        rep.pred_original.push_back(pred(orig, p));
        rep.pred_calibrated.push_back(pred(cal, p));
    }
    rep.improvement = improvement(rep.mmre_original, rep.mmre_calibrated);
    return rep;
}

} // namespace fpcal
