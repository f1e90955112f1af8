import rospy
import smach


class FindPerson(smach.State):
    """Scan the current area for a single person and designate it."""

    def __init__(self, robot, found_person_designator, timeout=10.0):
        smach.State.__init__(self, outcomes=['found', 'not_found'])
        self.robot = robot
        self.found_person_designator = found_person_designator
        self.timeout = timeout

    def execute(self, userdata=None):
        self.robot.head.look_around()
        detections = self.robot.perception.detect_people(timeout=self.timeout)
        if not detections:
            return 'not_found'
        self.found_person_designator.write(detections[0])
        return 'found'
