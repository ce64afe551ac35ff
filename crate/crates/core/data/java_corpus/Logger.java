package log;

import java.time.Instant;

public class Logger {
    public enum Level { DEBUG, INFO, WARN, ERROR }

    private final String name;
    private Level threshold = Level.INFO;

    public Logger(String name) { this.name = name; }

    public void setThreshold(Level level) { threshold = level; }

    public void log(Level level, String fmt, Object... args) {
        if (level.ordinal() < threshold.ordinal()) return; // filtered
        System.out.printf("%s [%s] %s: %s%n", Instant.now(), level, name, String.format(fmt, args));
    }

    /*
     * Convenience wrappers.
     */
    public void info(String fmt, Object... args) { log(Level.INFO, fmt, args); }

    public void warn(String fmt, Object... args) { log(Level.WARN, fmt, args); }
}
