#include "pbemo/human_bridge.hpp"

namespace pbemo::dm {

HumanBridge::HumanBridge(std::chrono::milliseconds timeout) : timeout_(timeout) {}

void HumanBridge::set_listener(Listener listener)
{
    std::lock_guard lock(mutex_);
    listener_ = std::move(listener);
}

void HumanBridge::notify()
{
    Listener l;
    {
        std::lock_guard lock(mutex_);
        l = listener_;
    }
    if (l) l();
}

Winner HumanBridge::answer(const DuelQuery& query)
{
    std::unique_lock lock(mutex_);
    if (cancelled_) throw DmAborted("consultation cancelled");
    pending_ = PendingQuery{next_id_++,       query.round,   query.first_cluster, query.second_cluster,
                            query.index_a,    query.index_b, query.a,             query.b};
    reply_.reset();
    lock.unlock();
    notify();
    lock.lock();

    const bool replied = cv_.wait_for(lock, timeout_, [&] { return reply_.has_value() || cancelled_; });
    if (replied && reply_) {
        const Winner w = *reply_;
        reply_.reset();
        return w;
    }
    pending_.reset();
    const bool was_cancelled = cancelled_;
    lock.unlock();
    notify();
    throw DmAborted(was_cancelled ? "consultation cancelled" : "no answer before the timeout");
}

std::optional<PendingQuery> HumanBridge::pending() const
{
    std::lock_guard lock(mutex_);
    return pending_;
}

SubmitStatus HumanBridge::submit(std::uint64_t query_id, Winner winner)
{
    {
        std::lock_guard lock(mutex_);
        if (!pending_ || pending_->id != query_id || cancelled_) return SubmitStatus::conflict;
        pending_.reset();
        reply_ = winner;
        ++answered_;
    }
    cv_.notify_all();
    notify();
    return SubmitStatus::accepted;
}

void HumanBridge::cancel()
{
    {
        std::lock_guard lock(mutex_);
        cancelled_ = true;
    }
    cv_.notify_all();
}

bool HumanBridge::cancelled() const
{
    std::lock_guard lock(mutex_);
    return cancelled_;
}

std::uint64_t HumanBridge::answered() const
{
    std::lock_guard lock(mutex_);
    return answered_;
}

} // namespace pbemo::dm
