package app;

import java.io.IOException;
import java.io.InputStream;
import java.util.Properties;

public class Config {
    private final Properties props = new Properties();

    /**
     * Loads {@code app.properties} from the classpath.
     */
    public Config() throws IOException {
        try (InputStream in = Config.class.getResourceAsStream("/app.properties")) {
            if (in != null) props.load(in);
        }
    }

    public String get(String key, String fallback) {
        return props.getProperty(key, fallback);
    }

    public int getInt(String key, int fallback) {
        String v = props.getProperty(key);
        try {
            return v == null ? fallback : Integer.parseInt(v.trim());
        } catch (NumberFormatException e) {
            return fallback; // malformed value
        }
    }
}
