package util;

import java.util.concurrent.Callable;

/** Retries a task with exponential backoff. */
public class Retry {
    private final int attempts;
    private final long baseDelayMillis;

    public Retry(int attempts, long baseDelayMillis) {
        this.attempts = attempts;
        this.baseDelayMillis = baseDelayMillis;
    }

    public <T> T call(Callable<T> task) throws Exception {
        Exception last = null;
        for (int i = 0; i < attempts; i++) {
            try {
                return task.call();
            } catch (Exception e) { // retry every exception
                last = e;
                Thread.sleep(baseDelayMillis << i);
            }
        }
        throw last;
    }
}
