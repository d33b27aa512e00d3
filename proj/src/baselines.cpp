#include "tracemon/baselines.hpp"

#include "tracemon/errors.hpp"

namespace tracemon {

std::vector<std::string> type_sequence(const Trace& trace) {
    std::vector<std::string> seq;
    seq.reserve(trace.events.size());
    for (const auto& e : trace.events) seq.push_back(e.etype.canonical());
    return seq;
}

NgramModel ngram_train(const std::vector<Trace>& traces, int n) {
    if (traces.empty()) throw EmptyCorpus();
    if (n < 1) throw InvalidConfig("n must be at least 1");
    NgramModel model;
    model.n = n;
    for (const auto& trace : traces) {
        const auto seq = type_sequence(trace);
        if (seq.size() < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + n <= seq.size(); ++i)
            model.dictionary.insert({seq.begin() + i, seq.begin() + i + n});
    }
    return model;
}

std::vector<FailureAlert> ngram_detect(const NgramModel& model, const Trace& trace) {
    std::vector<FailureAlert> alerts;
    const auto seq = type_sequence(trace);
    const std::size_t n = static_cast<std::size_t>(model.n);
    if (seq.size() < n) return alerts;
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
        std::vector<std::string> window(seq.begin() + i, seq.begin() + i + n);
        if (!model.dictionary.count(window))
            alerts.push_back(FailureAlert{"un", Violation::Unseen,
                                          trace.events[i + n - 1].ts_us,
                                          static_cast<std::int64_t>(i + 1)});
    }
    return alerts;
}

VmmModel vmm_train(const std::vector<Trace>& traces, int max_order) {
    if (traces.empty()) throw EmptyCorpus();
    if (max_order < 1) throw InvalidConfig("max_order must be at least 1");
    VmmModel model;
    model.max_order = max_order;
    for (const auto& trace : traces) {
        const auto seq = type_sequence(trace);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const std::size_t deepest = std::min<std::size_t>(max_order, i);
            for (std::size_t len = 0; len <= deepest; ++len) {
                std::vector<std::string> ctx(seq.begin() + (i - len), seq.begin() + i);
                ++model.transitions[ctx][seq[i]];
                ++model.totals[ctx];
            }
        }
    }
    return model;
}

std::pair<std::int64_t, std::int64_t> vmm_counts(const VmmModel& model,
                                                 const std::vector<std::string>& context,
                                                 const std::string& next) {
    const std::size_t deepest =
        std::min<std::size_t>(static_cast<std::size_t>(model.max_order), context.size());
    for (std::size_t len = deepest + 1; len-- > 0;) {
        std::vector<std::string> suffix(context.end() - len, context.end());
        auto it = model.transitions.find(suffix);
        if (it == model.transitions.end()) continue;
        auto succ = it->second.find(next);
        if (succ == it->second.end()) continue;
        return {succ->second, model.totals.at(suffix)};
    }
    return {0, 0};
}

double vmm_prob(const VmmModel& model, const std::vector<std::string>& context,
                const std::string& next) {
    const auto [num, den] = vmm_counts(model, context, next);
    if (den == 0) return 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<FailureAlert> vmm_detect(const VmmModel& model, const Trace& trace,
                                     double epsilon_pm) {
    if (epsilon_pm <= 0.0 || epsilon_pm > 1.0)
        throw InvalidConfig("epsilon_pm must lie in (0,1]");
    std::vector<FailureAlert> alerts;
    const auto seq = type_sequence(trace);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        std::vector<std::string> ctx(seq.begin() + (i - std::min<std::size_t>(
                                                            model.max_order, i)),
                                     seq.begin() + i);
        if (vmm_prob(model, ctx, seq[i]) < epsilon_pm)
            alerts.push_back(FailureAlert{"pm", Violation::Improbable, trace.events[i].ts_us,
                                          static_cast<std::int64_t>(i + 1)});
    }
    return alerts;
}

}  // namespace tracemon
