package jobs;

import java.util.concurrent.Executors;
import java.util.concurrent.ScheduledExecutorService;
import java.util.concurrent.TimeUnit;

/** Runs periodic jobs. */
public class Scheduler implements AutoCloseable {
    private final ScheduledExecutorService exec = Executors.newSingleThreadScheduledExecutor(r -> {
        Thread t = new Thread(r, "scheduler");
        t.setDaemon(true); // do not block JVM exit
        return t;
    });

    public void every(long seconds, Runnable job) {
        exec.scheduleAtFixedRate(() -> {
            try {
                job.run();
            } catch (RuntimeException e) {
                System.err.println("job failed: " + e); /* keep the schedule alive */
            }
        }, 0, seconds, TimeUnit.SECONDS);
    }

    @Override
    public void close() {
        exec.shutdownNow();
    }
}
