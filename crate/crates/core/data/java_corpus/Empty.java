package misc;

/** Intentionally empty. */
public class Empty {
}
