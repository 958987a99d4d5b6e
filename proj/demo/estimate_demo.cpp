// Draws a ground-truth metric on five points, measures it through log-normal
// noise and compares the single-linkage estimate with the truth.

#include <iostream>

#include "slhc/all.hpp"

int main() {
    slhc::Rng rng(7);
    const auto draw = slhc::sample_ground_truth_metric(5, 100.0, rng);
    const auto truth = slhc::slhc(draw.metric);
    std::cout << "ground truth found after " << draw.attempts << " uniform draws\n";
    std::cout << "true dendrogram:      " << slhc::to_newick(slhc::dendrogram_of(truth)) << '\n';

    const auto model = slhc::lognormal_model(0.1);
    std::vector<double> x;
    for (double theta : draw.metric) {
        x.push_back(slhc::sample(model, theta, rng));
    }
    const slhc::EdgeVector measured(5, x);
    const auto estimate = slhc::slhc_estimator(measured);
    std::cout << "estimated dendrogram: " << slhc::to_newick(slhc::dendrogram_of(estimate))
              << '\n';
    std::cout << "same structure: " << std::boolalpha << slhc::same_structure(estimate, truth)
              << ", l1 error: " << slhc::l1_error(estimate, truth)
              << ", MPPLE equals slhc: " << (slhc::mpple(measured, model) == estimate) << '\n';
}
