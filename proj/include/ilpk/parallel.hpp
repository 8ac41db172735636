#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ilpk {

/// Runs fn(0..count-1) on up to `threads` workers. The first exception thrown
/// by any call stops the remaining work and is rethrown here.
template <typename Fn>
void parallel_for(size_t count, unsigned threads, Fn &&fn)
{
	threads = static_cast<unsigned>(std::max<size_t>(1, std::min<size_t>(threads, count)));
	if (threads <= 1) {
		for (size_t i = 0; i < count; ++i)
			fn(i);
		return;
	}
	std::atomic<size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_lock;
	std::vector<std::thread> pool;
	for (unsigned w = 0; w < threads; ++w)
		pool.emplace_back([&] {
			for (size_t i; (i = next++) < count;) {
				try {
					fn(i);
				} catch (...) {
					std::lock_guard lock(failure_lock);
					if (!failure)
						failure = std::current_exception();
					next = count;
				}
			}
		});
	for (auto &t : pool)
		t.join();
	if (failure)
		std::rethrow_exception(failure);
}

} // namespace ilpk
